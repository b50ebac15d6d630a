#include "rcses/knowledge_model.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace rcses {

std::string to_string(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

bool has_errors(const IssueList& issues) {
    return std::any_of(issues.begin(), issues.end(),
                       [](const ParseIssue& i) { return i.severity == Severity::Error; });
}

bool same_name(std::string_view a, std::string_view b, const NormalizationPolicy& policy) {
    return normalize_text(a, policy) == normalize_text(b, policy);
}

std::vector<std::string> list_models(const RuleBase& rulebase) {
    std::vector<std::string> names;
    names.reserve(rulebase.models.size());
    for (const auto& m : rulebase.models) names.push_back(m.name);
    return names;
}

std::vector<ConceptRef> lookup_concept(const Ontology& ontology, std::string_view concept_name,
                                       const NormalizationPolicy& policy) {
    std::vector<ConceptRef> hits;
    const std::string key = normalize_text(concept_name, policy);
    for (const auto& reg : ontology.regulations) {
        for (const auto& ctx : reg.contexts) {
            for (const auto& c : ctx.concepts) {
                if (normalize_text(c.name, policy) == key) hits.push_back({&reg, &ctx, &c});
            }
        }
    }
    return hits;
}

const std::vector<std::string>& value_domain(const Concept& c) { return c.values; }

std::size_t rule_arity(const Rule& rule) { return rule.findings.size(); }

const Model* find_model(const RuleBase& rulebase, std::string_view name, const NormalizationPolicy& policy) {
    const std::string key = normalize_text(name, policy);
    for (const auto& m : rulebase.models) {
        if (normalize_text(m.name, policy) == key) return &m;
    }
    return nullptr;
}

const Rule* find_rule(const Model& model, std::string_view name, const NormalizationPolicy& policy) {
    const std::string key = normalize_text(name, policy);
    for (const auto& r : model.rules) {
        if (normalize_text(r.name, policy) == key) return &r;
    }
    return nullptr;
}

namespace {

std::string step(const char* element, std::size_t index) {
    return std::string("/") + element + "[" + std::to_string(index) + "]";
}

}  // namespace

std::string ontology_path(std::size_t r) { return "/KSA_Civil_Ontology" + step("OntParent", r); }
std::string ontology_path(std::size_t r, std::size_t c) { return ontology_path(r) + step("OntChild", c); }
std::string ontology_path(std::size_t r, std::size_t c, std::size_t k) {
    return ontology_path(r, c) + step("OntConcept", k);
}
std::string ontology_path(std::size_t r, std::size_t c, std::size_t k, std::size_t v) {
    return ontology_path(r, c, k) + step("OntVal", v);
}
std::string rulebase_path(std::size_t m) { return "/KSA_Civil_Regulation" + step("Model", m); }
std::string rulebase_path(std::size_t m, std::size_t r) { return rulebase_path(m) + step("Rule", r); }
std::string rulebase_path(std::size_t m, std::size_t r, std::size_t f) {
    return rulebase_path(m, r) + step("Finding", f);
}

namespace {

class SiblingNames {
public:
    SiblingNames(const NormalizationPolicy& policy, IssueList& out) : policy_(policy), out_(out) {}

    // Records `name`; reports EmptyName / DuplicateName against `path`.
    void check(const std::string& name, const std::string& path, const char* what) {
        std::string key = normalize_text(name, policy_);
        if (key.empty()) {
            out_.push_back({Severity::Error, path, issue_code::EmptyName, std::string(what) + " name is empty"});
            return;
        }
        if (!seen_.insert(key).second) {
            out_.push_back({Severity::Error, path, issue_code::DuplicateName,
                            std::string("duplicate ") + what + " name '" + name + "'"});
        }
    }

private:
    const NormalizationPolicy& policy_;
    IssueList& out_;
    std::unordered_set<std::string> seen_;
};

}  // namespace

IssueList validate_ontology(const Ontology& ontology, const NormalizationPolicy& policy) {
    IssueList issues;
    SiblingNames regs(policy, issues);
    for (std::size_t r = 0; r < ontology.regulations.size(); ++r) {
        const auto& reg = ontology.regulations[r];
        regs.check(reg.name, ontology_path(r + 1), "regulation");
        SiblingNames ctxs(policy, issues);
        for (std::size_t c = 0; c < reg.contexts.size(); ++c) {
            const auto& ctx = reg.contexts[c];
            ctxs.check(ctx.name, ontology_path(r + 1, c + 1), "context");
            SiblingNames concepts(policy, issues);
            for (std::size_t k = 0; k < ctx.concepts.size(); ++k) {
                const auto& con = ctx.concepts[k];
                const std::string path = ontology_path(r + 1, c + 1, k + 1);
                concepts.check(con.name, path, "concept");
                if (normalize_text(con.property, policy).empty()) {
                    issues.push_back({Severity::Error, path, issue_code::EmptyName, "concept property is empty"});
                }
                if (con.values.empty()) {
                    issues.push_back({Severity::Error, path, issue_code::EmptyDomain,
                                      "concept '" + con.name + "' has no values"});
                }
                SiblingNames values(policy, issues);
                for (std::size_t v = 0; v < con.values.size(); ++v) {
                    values.check(con.values[v], ontology_path(r + 1, c + 1, k + 1, v + 1), "value");
                }
            }
        }
    }
    return issues;
}

IssueList validate_rulebase(const RuleBase& rulebase, const NormalizationPolicy& policy) {
    IssueList issues;
    SiblingNames models(policy, issues);
    for (std::size_t m = 0; m < rulebase.models.size(); ++m) {
        const auto& model = rulebase.models[m];
        models.check(model.name, rulebase_path(m + 1), "model");
        SiblingNames rules(policy, issues);
        for (std::size_t r = 0; r < model.rules.size(); ++r) {
            const auto& rule = model.rules[r];
            const std::string path = rulebase_path(m + 1, r + 1);
            rules.check(rule.name, path, "rule");
            if (normalize_text(rule.consequent, policy).empty()) {
                issues.push_back({Severity::Error, path, issue_code::EmptyName, "rule consequent is empty"});
            }
            if (rule.findings.empty()) {
                issues.push_back({Severity::Error, path, issue_code::EmptyRule,
                                  "rule '" + rule.name + "' has no findings"});
            }
            std::set<std::pair<std::string, std::string>> slots;
            for (std::size_t f = 0; f < rule.findings.size(); ++f) {
                const auto& fd = rule.findings[f];
                const std::string fpath = rulebase_path(m + 1, r + 1, f + 1);
                std::string cpt = normalize_text(fd.concept_name, policy);
                std::string prop = normalize_text(fd.property, policy);
                if (cpt.empty() || prop.empty() || normalize_text(fd.value, policy).empty()) {
                    issues.push_back({Severity::Error, fpath, issue_code::EmptyName,
                                      "finding concept, property and value must be non-empty"});
                    continue;
                }
                if (!slots.emplace(std::move(cpt), std::move(prop)).second) {
                    issues.push_back({Severity::Error, fpath, issue_code::DuplicateSlot,
                                      "rule '" + rule.name + "' tests slot (" + fd.concept_name + ", " +
                                          fd.property + ") more than once"});
                }
            }
        }
    }
    return issues;
}

}  // namespace rcses
