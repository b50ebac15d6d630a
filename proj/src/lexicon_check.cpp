#include "rcses/lexicon_check.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace rcses {

std::size_t LintReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [](const auto& v) { return v.severity == Severity::Error; }));
}

std::size_t LintReport::warning_count() const { return violations.size() - error_count(); }

std::size_t LintReport::count(std::string_view code) const {
    auto it = counts.find(std::string(code));
    return it == counts.end() ? 0 : it->second;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::vector<std::string> rank_candidates(std::string_view token, const std::vector<std::string>& candidates,
                                         const NormalizationPolicy& policy, std::size_t k) {
    const std::u32string needle = to_code_points(normalize_text(token, policy));
    const std::size_t threshold = std::max<std::size_t>(2, (needle.size() + 3) / 4);

    struct Scored {
        std::size_t distance;
        std::size_t order;
        const std::string* name;
    };
    std::vector<Scored> scored;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::string key = normalize_text(candidates[i], policy);
        if (!seen.insert(key).second) continue;
        std::size_t d = edit_distance(needle, to_code_points(key));
        if (d <= threshold) scored.push_back({d, i, &candidates[i]});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) { return a.distance < b.distance; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && out.size() < k; ++i) out.push_back(*scored[i].name);
    return out;
}

namespace {

std::vector<std::string> ontology_names(const Ontology& ontology) {
    std::vector<std::string> names;
    for (const auto& reg : ontology.regulations) {
        for (const auto& ctx : reg.contexts) {
            for (const auto& con : ctx.concepts) {
                names.push_back(con.name);
                names.insert(names.end(), con.values.begin(), con.values.end());
            }
        }
    }
    return names;
}

std::vector<std::string> concept_names(const Ontology& ontology) {
    std::vector<std::string> names;
    for (const auto& reg : ontology.regulations) {
        for (const auto& ctx : reg.contexts) {
            for (const auto& con : ctx.concepts) names.push_back(con.name);
        }
    }
    return names;
}

// A concept name may occur in several contexts; occurrences that agree on
// property and value domain resolve as one concept.
struct ResolvedConcept {
    std::string property_key;
    std::string property;
    std::vector<std::string> values;
    std::unordered_set<std::string> value_keys;
    bool ambiguous = false;
};

}  // namespace

std::vector<std::string> suggest_corrections(std::string_view token, const Ontology& ontology,
                                             const NormalizationPolicy& policy, std::size_t k) {
    return rank_candidates(token, ontology_names(ontology), policy, k);
}

LintReport check_rulebase(const RuleBase& rulebase, const Ontology& ontology, const NormalizationPolicy& policy) {
    std::unordered_map<std::string, ResolvedConcept> resolved;
    for (const auto& reg : ontology.regulations) {
        for (const auto& ctx : reg.contexts) {
            for (const auto& con : ctx.concepts) {
                std::unordered_set<std::string> keys;
                for (const auto& v : con.values) keys.insert(normalize_text(v, policy));
                std::string prop = normalize_text(con.property, policy);
                auto [it, inserted] = resolved.try_emplace(normalize_text(con.name, policy));
                if (inserted) {
                    it->second = {prop, con.property, con.values, std::move(keys), false};
                } else if (it->second.property_key != prop || it->second.value_keys != keys) {
                    it->second.ambiguous = true;
                }
            }
        }
    }
    const std::vector<std::string> concepts = concept_names(ontology);

    LintReport report;
    auto add = [&](LintViolation v) {
        ++report.counts[v.code];
        report.violations.push_back(std::move(v));
    };

    for (std::size_t m = 0; m < rulebase.models.size(); ++m) {
        const auto& model = rulebase.models[m];
        for (std::size_t r = 0; r < model.rules.size(); ++r) {
            const auto& rule = model.rules[r];
            for (std::size_t f = 0; f < rule.findings.size(); ++f) {
                const auto& fd = rule.findings[f];
                LintViolation base{Severity::Error, {}, model.name, rule.name, f + 1,
                                   rulebase_path(m + 1, r + 1, f + 1), {}, {}, {}};

                auto it = resolved.find(normalize_text(fd.concept_name, policy));
                if (it == resolved.end()) {
                    LintViolation v = base;
                    v.code = lint_code::UnknownConcept;
                    v.token = fd.concept_name;
                    v.suggestions = rank_candidates(fd.concept_name, concepts, policy, 3);
                    v.message = "concept '" + fd.concept_name + "' is not in the ontology";
                    add(std::move(v));
                    continue;
                }
                const ResolvedConcept& rc = it->second;
                if (rc.ambiguous) {
                    LintViolation v = base;
                    v.code = lint_code::AmbiguousConcept;
                    v.token = fd.concept_name;
                    v.message = "concept '" + fd.concept_name +
                                "' occurs in several contexts with different properties or values";
                    add(std::move(v));
                    continue;
                }
                if (normalize_text(fd.property, policy) != rc.property_key) {
                    LintViolation v = base;
                    v.code = lint_code::UnknownProperty;
                    v.token = fd.property;
                    v.suggestions = {rc.property};
                    v.message = "concept '" + fd.concept_name + "' has property '" + rc.property + "', not '" +
                                fd.property + "'";
                    add(std::move(v));
                }
                if (!rc.value_keys.contains(normalize_text(fd.value, policy))) {
                    LintViolation v = base;
                    v.code = lint_code::UnknownValue;
                    v.severity = fd.polarity == Polarity::MustEqual ? Severity::Error : Severity::Warning;
                    v.token = fd.value;
                    v.suggestions = rank_candidates(fd.value, rc.values, policy, 3);
                    v.message = "value '" + fd.value + "' is not in the domain of '" + fd.concept_name + "'";
                    add(std::move(v));
                }
            }
        }
    }
    return report;
}

std::string format_report(const LintReport& report) {
    std::string out;
    for (const auto& v : report.violations) {
        out += to_string(v.severity) + " " + v.code + " " + v.path + " [" + v.model + "/" + v.rule + "#" +
               std::to_string(v.finding) + "] " + v.message;
        if (!v.suggestions.empty()) {
            out += " (did you mean:";
            for (std::size_t i = 0; i < v.suggestions.size(); ++i) out += (i ? ", '" : " '") + v.suggestions[i] + "'";
            out += ")";
        }
        out += "\n";
    }
    out += std::to_string(report.error_count()) + " error(s), " + std::to_string(report.warning_count()) +
           " warning(s)\n";
    return out;
}

}  // namespace rcses
