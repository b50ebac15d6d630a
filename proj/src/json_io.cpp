#include "rcses/json_io.hpp"

#include <map>

namespace rcses {

Json to_json(const ParseIssue& issue) {
    return {{"severity", to_string(issue.severity)}, {"path", issue.path}, {"code", issue.code},
            {"message", issue.message}};
}

Json to_json(const IssueList& issues) {
    Json arr = Json::array();
    for (const auto& i : issues) arr.push_back(to_json(i));
    return arr;
}

Json to_json(const LintReport& report) {
    Json violations = Json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"severity", to_string(v.severity)},
                              {"code", v.code},
                              {"model", v.model},
                              {"rule", v.rule},
                              {"finding", v.finding},
                              {"path", v.path},
                              {"token", v.token},
                              {"suggestions", v.suggestions},
                              {"message", v.message}});
    }
    Json counts = Json::object();
    for (const auto& [code, n] : report.counts) counts[code] = n;
    return {{"violations", violations},
            {"counts", counts},
            {"error_count", report.error_count()},
            {"warning_count", report.warning_count()}};
}

Json to_json(const Slot& slot) { return {{"concept", slot.concept_name}, {"property", slot.property}}; }

namespace {

Json slots_json(const std::vector<Slot>& slots) {
    Json arr = Json::array();
    for (const auto& s : slots) arr.push_back(to_json(s));
    return arr;
}

std::string require_string(const Json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) {
        throw BuilderError(BuilderErrc::BadEdit, std::string("edit field '") + field + "' must be a string");
    }
    return it->get<std::string>();
}

std::string optional_string(const Json& obj, const char* field, std::string fallback) {
    auto it = obj.find(field);
    if (it == obj.end()) return fallback;
    if (!it->is_string()) throw BuilderError(BuilderErrc::BadEdit, std::string("edit field '") + field + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> string_list(const Json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end()) return {};
    if (!it->is_array()) throw BuilderError(BuilderErrc::BadEdit, std::string("edit field '") + field + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : *it) {
        if (!e.is_string()) throw BuilderError(BuilderErrc::BadEdit, std::string("'") + field + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

Finding finding_from_json(const Json& j) {
    if (!j.is_object()) throw BuilderError(BuilderErrc::BadEdit, "finding must be an object");
    Finding f;
    f.concept_name = require_string(j, "concept");
    f.property = optional_string(j, "property", kDefaultProperty);
    f.value = require_string(j, "value");
    auto eq = j.find("equal");
    if (eq == j.end() || (eq->is_string() && eq->get<std::string>() == "Yes") || (eq->is_boolean() && eq->get<bool>())) {
        f.polarity = Polarity::MustEqual;
    } else if ((eq->is_string() && eq->get<std::string>() == "No") || (eq->is_boolean() && !eq->get<bool>())) {
        f.polarity = Polarity::MustDiffer;
    } else {
        throw BuilderError(BuilderErrc::BadEdit, "finding 'equal' must be \"Yes\", \"No\" or a boolean");
    }
    return f;
}

}  // namespace

Json to_json(const EvaluationResult& result) {
    Json sure = Json::array(), expected = Json::array(), excluded = Json::array();
    for (const auto& s : result.sure) sure.push_back({{"rule", s.rule}, {"consequent", s.consequent}});
    for (const auto& e : result.expected) {
        expected.push_back({{"rule", e.rule}, {"consequent", e.consequent}, {"unanswered", slots_json(e.unanswered)}});
    }
    for (const auto& x : result.excluded) {
        excluded.push_back({{"rule", x.rule}, {"consequent", x.consequent}, {"violated", slots_json(x.violated)}});
    }
    return {{"sure", sure}, {"expected", expected}, {"excluded", excluded}, {"kb_version", result.kb_version}};
}

Json to_json(const std::vector<Question>& questions) {
    Json arr = Json::array();
    for (const auto& q : questions) {
        arr.push_back({{"concept", q.slot.concept_name},
                       {"property", q.slot.property},
                       {"domain", q.domain},
                       {"score", q.score}});
    }
    return arr;
}

std::string dump_json(const Json& j, int indent) {
    return j.dump(indent, ' ', false, Json::error_handler_t::replace);
}

KbEdit edit_from_json(const Json& record) {
    if (!record.is_object()) throw BuilderError(BuilderErrc::BadEdit, "edit record must be a JSON object");
    const std::string target = require_string(record, "target");
    const std::string kind = require_string(record, "kind");
    std::vector<std::string> path = string_list(record, "path");

    if (target == "ontology") {
        static const std::map<std::string, OntologyEditKind> kinds = {
            {"add-regulation", OntologyEditKind::AddRegulation}, {"add-context", OntologyEditKind::AddContext},
            {"add-concept", OntologyEditKind::AddConcept},       {"add-value", OntologyEditKind::AddValue},
            {"rename", OntologyEditKind::Rename},                {"delete", OntologyEditKind::Delete}};
        auto it = kinds.find(kind);
        if (it == kinds.end()) throw BuilderError(BuilderErrc::BadEdit, "unknown ontology edit kind '" + kind + "'");
        OntologyEdit e;
        e.kind = it->second;
        e.path = std::move(path);
        if (e.kind == OntologyEditKind::Rename) e.new_name = require_string(record, "name");
        e.property = optional_string(record, "property", kDefaultProperty);
        e.values = string_list(record, "values");
        return e;
    }
    if (target == "rules") {
        static const std::map<std::string, RuleEditKind> kinds = {
            {"add-model", RuleEditKind::AddModel},     {"add-rule", RuleEditKind::AddRule},
            {"add-finding", RuleEditKind::AddFinding}, {"set-consequent", RuleEditKind::SetConsequent},
            {"rename", RuleEditKind::Rename},          {"delete", RuleEditKind::Delete}};
        auto it = kinds.find(kind);
        if (it == kinds.end()) throw BuilderError(BuilderErrc::BadEdit, "unknown rule edit kind '" + kind + "'");
        RuleEdit e;
        e.kind = it->second;
        e.path = std::move(path);
        if (e.kind == RuleEditKind::Rename) e.new_name = require_string(record, "name");
        if (e.kind == RuleEditKind::AddRule || e.kind == RuleEditKind::SetConsequent) {
            e.consequent = require_string(record, "consequent");
        }
        if (auto f = record.find("findings"); f != record.end()) {
            if (!f->is_array()) throw BuilderError(BuilderErrc::BadEdit, "'findings' must be an array");
            for (const auto& fj : *f) e.findings.push_back(finding_from_json(fj));
        }
        if (auto f = record.find("finding"); f != record.end()) {
            if (f->is_object()) {
                e.findings.push_back(finding_from_json(*f));
            } else if (f->is_number_unsigned()) {
                e.finding = f->get<std::size_t>();
            } else {
                throw BuilderError(BuilderErrc::BadEdit, "'finding' must be an object or a 1-based index");
            }
        }
        return e;
    }
    throw BuilderError(BuilderErrc::BadEdit, "edit target must be \"ontology\" or \"rules\"");
}

std::vector<KbEdit> edits_from_json(const Json& array) {
    if (!array.is_array()) throw BuilderError(BuilderErrc::BadEdit, "edit file must hold a JSON array");
    std::vector<KbEdit> out;
    for (const auto& r : array) out.push_back(edit_from_json(r));
    return out;
}

}  // namespace rcses
