#include "rcses/kb_xml.hpp"

#include "xml_reader.hpp"

#include <initializer_list>

namespace rcses {
namespace {

using detail::XmlElement;

class SchemaWalker {
public:
    explicit SchemaWalker(IssueList& issues) : issues_(issues) {}

    void error(const XmlElement& el, const char* code, std::string message) {
        issues_.push_back({Severity::Error, el.path, code, std::move(message)});
    }

    // Warns about attributes outside `known` and about character data.
    void check_extras(const XmlElement& el, std::initializer_list<std::string_view> known) {
        for (const auto& a : el.attributes) {
            bool ok = false;
            for (auto k : known) ok = ok || a.name == k;
            if (!ok) {
                issues_.push_back({Severity::Warning, el.path, issue_code::UnknownAttribute,
                                   "attribute '" + a.name + "' is not part of <" + el.name + ">"});
            }
        }
        if (el.has_text) {
            issues_.push_back({Severity::Warning, el.path, issue_code::UnexpectedText,
                               "character data inside <" + el.name + "> ignored"});
        }
    }

    // Returns the attribute in display form or nullopt after recording AttributeMissing.
    std::optional<std::string> required(const XmlElement& el, std::string_view attr) {
        const std::string* v = el.attribute(attr);
        if (v == nullptr) {
            error(el, issue_code::AttributeMissing, "<" + el.name + "> requires attribute " + std::string(attr));
            return std::nullopt;
        }
        return display_text(*v);
    }

    bool expect_name(const XmlElement& el, std::string_view expected) {
        if (el.name == expected) return true;
        error(el, issue_code::UnknownElement, "unexpected element <" + el.name + ">");
        return false;
    }

    void warn(const XmlElement& el, const char* code, std::string message) {
        issues_.push_back({Severity::Warning, el.path, code, std::move(message)});
    }

private:
    IssueList& issues_;
};

template <class T, class Build>
ParseOutcome<T> parse_document(std::string_view bytes, std::string_view root_name, Build build) {
    ParseOutcome<T> out;
    detail::XmlDocument doc = detail::read_xml(bytes);
    out.issues = std::move(doc.issues);
    if (!doc.root) return out;

    SchemaWalker walker(out.issues);
    if (!walker.expect_name(*doc.root, root_name)) return out;
    walker.check_extras(*doc.root, {});
    T value = build(*doc.root, walker);
    if (!has_errors(out.issues)) out.value = std::move(value);
    return out;
}

bool is_unsigned_integer(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

void open_tag(std::string& out, int depth, std::string_view element,
              std::initializer_list<std::pair<std::string_view, std::string_view>> attrs, bool self_close) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += '<';
    out += element;
    for (const auto& [k, v] : attrs) {
        out += ' ';
        out += k;
        out += "=\"";
        out += escape_attribute(v);
        out += '"';
    }
    out += self_close ? "/>\n" : ">\n";
}

void close_tag(std::string& out, int depth, std::string_view element) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "</";
    out += element;
    out += ">\n";
}

}  // namespace

std::string escape_attribute(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
    return out;
}

ParseOutcome<Ontology> parse_ontology(std::string_view bytes, const NormalizationPolicy& policy) {
    auto out = parse_document<Ontology>(bytes, "KSA_Civil_Ontology", [](const XmlElement& root, SchemaWalker& w) {
        Ontology ont;
        for (const auto& p : root.children) {
            if (!w.expect_name(p, "OntParent")) continue;
            w.check_extras(p, {"ParentName"});
            Regulation reg;
            if (auto n = w.required(p, "ParentName")) reg.name = *n;
            for (const auto& c : p.children) {
                if (!w.expect_name(c, "OntChild")) continue;
                w.check_extras(c, {"ChildName"});
                Context ctx;
                if (auto n = w.required(c, "ChildName")) ctx.name = *n;
                for (const auto& k : c.children) {
                    if (!w.expect_name(k, "OntConcept")) continue;
                    w.check_extras(k, {"ConceptName", "Prop"});
                    Concept con;
                    if (auto n = w.required(k, "ConceptName")) con.name = *n;
                    if (const std::string* prop = k.attribute("Prop")) con.property = display_text(*prop);
                    for (const auto& v : k.children) {
                        if (!w.expect_name(v, "OntVal")) continue;
                        w.check_extras(v, {"ValueName"});
                        for (const auto& stray : v.children) {
                            w.error(stray, issue_code::UnknownElement, "<OntVal> takes no child elements");
                        }
                        if (auto n = w.required(v, "ValueName")) con.values.push_back(*n);
                    }
                    ctx.concepts.push_back(std::move(con));
                }
                reg.contexts.push_back(std::move(ctx));
            }
            ont.regulations.push_back(std::move(reg));
        }
        return ont;
    });
    if (out.value) {
        IssueList problems = validate_ontology(*out.value, policy);
        if (has_errors(problems)) out.value.reset();
        out.issues.insert(out.issues.end(), problems.begin(), problems.end());
    }
    return out;
}

ParseOutcome<RuleBase> parse_rulebase(std::string_view bytes, const NormalizationPolicy& policy) {
    auto out = parse_document<RuleBase>(bytes, "KSA_Civil_Regulation", [](const XmlElement& root, SchemaWalker& w) {
        RuleBase rb;
        for (const auto& m : root.children) {
            if (!w.expect_name(m, "Model")) continue;
            w.check_extras(m, {"ModelName"});
            Model model;
            if (auto n = w.required(m, "ModelName")) model.name = *n;
            for (const auto& r : m.children) {
                if (!w.expect_name(r, "Rule")) continue;
                w.check_extras(r, {"Name", "RegItem", "NoTrueFinding", "NoTrueFindings"});
                Rule rule;
                if (auto n = w.required(r, "Name")) rule.name = *n;
                if (auto n = w.required(r, "RegItem")) rule.consequent = *n;
                for (const char* counter : {"NoTrueFinding", "NoTrueFindings"}) {
                    const std::string* v = r.attribute(counter);
                    if (v != nullptr && !is_unsigned_integer(*v)) {
                        w.warn(r, issue_code::BadCounter, std::string(counter) + " is not a non-negative integer");
                    }
                }
                for (const auto& f : r.children) {
                    if (!w.expect_name(f, "Finding")) continue;
                    w.check_extras(f, {"Cpt", "Prop", "Val", "Equal", "ExistInWM"});
                    for (const auto& stray : f.children) {
                        w.error(stray, issue_code::UnknownElement, "<Finding> takes no child elements");
                    }
                    Finding fd;
                    auto cpt = w.required(f, "Cpt");
                    auto prop = w.required(f, "Prop");
                    auto val = w.required(f, "Val");
                    auto equal = w.required(f, "Equal");
                    if (cpt) fd.concept_name = *cpt;
                    if (prop) fd.property = *prop;
                    if (val) fd.value = *val;
                    if (equal) {
                        if (*equal == "Yes") fd.polarity = Polarity::MustEqual;
                        else if (*equal == "No") fd.polarity = Polarity::MustDiffer;
                        else w.error(f, issue_code::BadPolarity, "Equal must be \"Yes\" or \"No\", got \"" + *equal + "\"");
                    }
                    if (const std::string* wm = f.attribute("ExistInWM"); wm != nullptr && *wm != "Yes" && *wm != "No") {
                        w.warn(f, issue_code::BadCounter, "ExistInWM should be \"Yes\" or \"No\"");
                    }
                    rule.findings.push_back(std::move(fd));
                }
                model.rules.push_back(std::move(rule));
            }
            rb.models.push_back(std::move(model));
        }
        return rb;
    });
    if (out.value) {
        IssueList problems = validate_rulebase(*out.value, policy);
        if (has_errors(problems)) out.value.reset();
        out.issues.insert(out.issues.end(), problems.begin(), problems.end());
    }
    return out;
}

CanonicalDocument serialize_ontology(const Ontology& ontology) {
    std::string out;
    if (ontology.regulations.empty()) return {"<KSA_Civil_Ontology/>\n", DocumentKind::Ontology};
    out += "<KSA_Civil_Ontology>\n";
    for (const auto& reg : ontology.regulations) {
        bool leaf = reg.contexts.empty();
        open_tag(out, 1, "OntParent", {{"ParentName", reg.name}}, leaf);
        for (const auto& ctx : reg.contexts) {
            bool ctx_leaf = ctx.concepts.empty();
            open_tag(out, 2, "OntChild", {{"ChildName", ctx.name}}, ctx_leaf);
            for (const auto& con : ctx.concepts) {
                bool con_leaf = con.values.empty();
                if (con.property == kDefaultProperty) {
                    open_tag(out, 3, "OntConcept", {{"ConceptName", con.name}}, con_leaf);
                } else {
                    open_tag(out, 3, "OntConcept", {{"ConceptName", con.name}, {"Prop", con.property}}, con_leaf);
                }
                for (const auto& v : con.values) open_tag(out, 4, "OntVal", {{"ValueName", v}}, true);
                if (!con_leaf) close_tag(out, 3, "OntConcept");
            }
            if (!ctx_leaf) close_tag(out, 2, "OntChild");
        }
        if (!leaf) close_tag(out, 1, "OntParent");
    }
    out += "</KSA_Civil_Ontology>\n";
    return {std::move(out), DocumentKind::Ontology};
}

CanonicalDocument serialize_rulebase(const RuleBase& rulebase) {
    std::string out;
    if (rulebase.models.empty()) return {"<KSA_Civil_Regulation/>\n", DocumentKind::RuleBase};
    out += "<KSA_Civil_Regulation>\n";
    for (const auto& model : rulebase.models) {
        bool leaf = model.rules.empty();
        open_tag(out, 1, "Model", {{"ModelName", model.name}}, leaf);
        for (const auto& rule : model.rules) {
            bool rule_leaf = rule.findings.empty();
            open_tag(out, 2, "Rule", {{"Name", rule.name}, {"RegItem", rule.consequent}, {"NoTrueFinding", "0"}},
                     rule_leaf);
            for (const auto& f : rule.findings) {
                open_tag(out, 3, "Finding",
                         {{"Cpt", f.concept_name},
                          {"Prop", f.property},
                          {"Val", f.value},
                          {"Equal", f.polarity == Polarity::MustEqual ? "Yes" : "No"},
                          {"ExistInWM", "No"}},
                         true);
            }
            if (!rule_leaf) close_tag(out, 2, "Rule");
        }
        if (!leaf) close_tag(out, 1, "Model");
    }
    out += "</KSA_Civil_Regulation>\n";
    return {std::move(out), DocumentKind::RuleBase};
}

}  // namespace rcses
