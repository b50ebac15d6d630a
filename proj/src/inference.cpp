#include "rcses/inference.hpp"

#include <algorithm>
#include <numeric>

namespace rcses {

std::string to_string(InferenceErrc code) {
    switch (code) {
        case InferenceErrc::UnknownModel: return "UnknownModel";
        case InferenceErrc::UnknownSlot: return "UnknownSlot";
        case InferenceErrc::UnknownValue: return "UnknownValue";
        case InferenceErrc::StaleKb: return "StaleKb";
        case InferenceErrc::NotAnswered: return "NotAnswered";
        case InferenceErrc::UnknownRule: return "UnknownRule";
    }
    return "Unknown";
}

std::string to_string(LogAction action) {
    switch (action) {
        case LogAction::Assert: return "assert";
        case LogAction::Replace: return "replace";
        case LogAction::Retract: return "retract";
    }
    return "assert";
}

std::string to_string(RuleStatus status) {
    switch (status) {
        case RuleStatus::Sure: return "sure";
        case RuleStatus::Expected: return "expected";
        case RuleStatus::Excluded: return "excluded";
    }
    return "expected";
}

std::optional<RuleStatus> EvaluationResult::status_of(std::string_view rule) const {
    for (const auto& s : sure) if (s.rule == rule) return RuleStatus::Sure;
    for (const auto& e : expected) if (e.rule == rule) return RuleStatus::Expected;
    for (const auto& x : excluded) if (x.rule == rule) return RuleStatus::Excluded;
    return std::nullopt;
}

namespace {

bool finding_satisfied(const CompiledModel::FindingRef& f, const std::string& observed_key) {
    return f.polarity == Polarity::MustEqual ? observed_key == f.value_key : observed_key != f.value_key;
}

RuleStatus status_from_counts(std::uint32_t satisfied, std::uint32_t violated, std::uint32_t arity) {
    if (satisfied == arity) return RuleStatus::Sure;
    if (violated > 0) return RuleStatus::Excluded;
    return RuleStatus::Expected;
}

Slot slot_of(const CompiledModel::SlotRef& s) { return {s.concept_name, s.property}; }

// Sets the mirror of every finding on `slot` from `observed` (nullptr = unanswered).
void update_slot(SessionState& s, std::uint32_t slot, const std::string* observed) {
    const CompiledModel& cm = s.compiled();
    const bool was_answered = s.slot_answered[slot];
    for (std::uint32_t g : cm.slots[slot].findings) {
        const auto& f = cm.findings[g];
        const bool was_sat = s.finding_mirrors[g];
        const bool was_violated = was_answered && !was_sat;
        const bool now_sat = observed != nullptr && finding_satisfied(f, *observed);
        const bool now_violated = observed != nullptr && !now_sat;
        if (was_sat != now_sat) {
            s.finding_mirrors[g] = now_sat;
            if (now_sat) ++s.rule_counters[f.rule];
            else --s.rule_counters[f.rule];
        }
        if (was_violated != now_violated) {
            if (now_violated) ++s.rule_violations[f.rule];
            else --s.rule_violations[f.rule];
        }
    }
    s.slot_answered[slot] = observed != nullptr;
}

}  // namespace

SessionState new_session(KbSnapshotPtr kb, std::string_view model_name, std::string id, std::int64_t now) {
    std::ptrdiff_t idx = kb->model_index(model_name);
    if (idx < 0) {
        throw InferenceError(InferenceErrc::UnknownModel, "no model named '" + std::string(model_name) + "'");
    }
    SessionState s;
    s.id = std::move(id);
    s.kb_version = kb->version();
    s.model_index = static_cast<std::size_t>(idx);
    s.model_name = kb->rulebase().models[s.model_index].name;
    s.kb = std::move(kb);
    const CompiledModel& cm = s.compiled();
    s.finding_mirrors.assign(cm.findings.size(), false);
    s.rule_counters.assign(cm.rules.size(), 0);
    s.rule_violations.assign(cm.rules.size(), 0);
    s.slot_answered.assign(cm.slots.size(), false);
    s.created_at = now;
    s.last_active = now;
    return s;
}

void assert_finding(SessionState& s, std::string_view concept_name, std::string_view property,
                    std::string_view value, const AssertOptions& options) {
    const KbSnapshot& kb = *s.kb;
    Slot requested{display_text(concept_name), display_text(property)};
    if (options.require_kb_version && *options.require_kb_version != s.kb_version) {
        throw InferenceError(InferenceErrc::StaleKb,
                             "session is pinned to KB version " + std::to_string(s.kb_version) +
                                 ", current is " + std::to_string(*options.require_kb_version),
                             requested);
    }

    const std::string concept_key = kb.key(concept_name);
    const std::string property_key = kb.key(property);
    const std::string slot_key = kb.slot_key(concept_name, property);
    const CompiledModel& cm = s.compiled();
    auto model_slot = cm.slot_index.find(slot_key);
    const OntologyIndex::Entry* onto = kb.ontology_index().find(concept_key);
    const bool in_ontology =
        onto != nullptr && std::find(onto->property_keys.begin(), onto->property_keys.end(), property_key) !=
                               onto->property_keys.end();
    if (model_slot == cm.slot_index.end() && !in_ontology) {
        throw InferenceError(InferenceErrc::UnknownSlot,
                             "slot (" + requested.concept_name + ", " + requested.property +
                                 ") is not used by this model or the ontology",
                             requested);
    }

    const std::string value_key = kb.key(value);
    if (value_key.empty() || (onto != nullptr && !onto->domain_keys.contains(value_key))) {
        throw InferenceError(InferenceErrc::UnknownValue,
                             "value '" + std::string(value) + "' is outside the domain of '" +
                                 requested.concept_name + "'",
                             requested);
    }

    WmEntry entry{requested, display_text(value), value_key};
    if (model_slot != cm.slot_index.end()) entry.slot = slot_of(cm.slots[model_slot->second]);

    auto [it, inserted] = s.wm.entries.insert_or_assign(slot_key, entry);
    s.wm.log.push_back({entry.slot, entry.value, inserted ? LogAction::Assert : LogAction::Replace});
    if (model_slot != cm.slot_index.end()) update_slot(s, model_slot->second, &it->second.value_key);
}

void retract_finding(SessionState& s, std::string_view concept_name, std::string_view property) {
    const std::string slot_key = s.kb->slot_key(concept_name, property);
    auto it = s.wm.entries.find(slot_key);
    if (it == s.wm.entries.end()) {
        Slot requested{display_text(concept_name), display_text(property)};
        throw InferenceError(InferenceErrc::NotAnswered,
                             "slot (" + requested.concept_name + ", " + requested.property + ") is not answered",
                             requested);
    }
    Slot slot = it->second.slot;
    s.wm.entries.erase(it);
    s.wm.log.push_back({slot, {}, LogAction::Retract});
    const CompiledModel& cm = s.compiled();
    if (auto ms = cm.slot_index.find(slot_key); ms != cm.slot_index.end()) update_slot(s, ms->second, nullptr);
}

EvaluationResult evaluate(const SessionState& s) {
    EvaluationResult result;
    result.kb_version = s.kb_version;
    const Model& model = s.model();
    const CompiledModel& cm = s.compiled();
    for (std::size_t r = 0; r < cm.rules.size(); ++r) {
        const auto& rr = cm.rules[r];
        const Rule& rule = model.rules[r];
        switch (status_from_counts(s.rule_counters[r], s.rule_violations[r], rr.arity)) {
            case RuleStatus::Sure:
                result.sure.push_back({rule.name, rule.consequent});
                break;
            case RuleStatus::Excluded: {
                ExcludedResult x{rule.name, rule.consequent, {}};
                for (std::uint32_t g = rr.first_finding; g < rr.first_finding + rr.arity; ++g) {
                    const auto& f = cm.findings[g];
                    if (s.slot_answered[f.slot] && !s.finding_mirrors[g]) x.violated.push_back(slot_of(cm.slots[f.slot]));
                }
                result.excluded.push_back(std::move(x));
                break;
            }
            case RuleStatus::Expected: {
                ExpectedResult e{rule.name, rule.consequent, {}};
                for (std::uint32_t g = rr.first_finding; g < rr.first_finding + rr.arity; ++g) {
                    const auto& f = cm.findings[g];
                    if (!s.slot_answered[f.slot]) e.unanswered.push_back(slot_of(cm.slots[f.slot]));
                }
                result.expected.push_back(std::move(e));
                break;
            }
        }
    }
    return result;
}

std::vector<Question> next_questions(const SessionState& s, std::size_t k) {
    const CompiledModel& cm = s.compiled();
    std::vector<std::uint32_t> score(cm.slots.size(), 0);
    for (std::size_t r = 0; r < cm.rules.size(); ++r) {
        const auto& rr = cm.rules[r];
        if (status_from_counts(s.rule_counters[r], s.rule_violations[r], rr.arity) != RuleStatus::Expected) continue;
        for (std::uint32_t g = rr.first_finding; g < rr.first_finding + rr.arity; ++g) {
            const auto slot = cm.findings[g].slot;
            if (!s.slot_answered[slot]) ++score[slot];
        }
    }

    std::vector<std::uint32_t> order;
    for (std::uint32_t i = 0; i < score.size(); ++i) {
        if (score[i] > 0) order.push_back(i);
    }
    // Slot ids follow first document-order occurrence, so a stable sort keeps the tie-break.
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return score[a] > score[b]; });
    if (order.size() > k) order.resize(k);

    std::vector<Question> out;
    out.reserve(order.size());
    for (auto i : order) {
        Question q{slot_of(cm.slots[i]), {}, score[i]};
        if (const auto* entry = s.kb->ontology_index().find(s.kb->key(q.slot.concept_name))) q.domain = entry->domain;
        out.push_back(std::move(q));
    }
    return out;
}

Trace explain(const SessionState& s, std::string_view rule_name) {
    const Model& model = s.model();
    const CompiledModel& cm = s.compiled();
    const std::string wanted = s.kb->key(rule_name);
    for (std::size_t r = 0; r < model.rules.size(); ++r) {
        const Rule& rule = model.rules[r];
        if (s.kb->key(rule.name) != wanted) continue;
        const auto& rr = cm.rules[r];
        Trace t{rule.name, rule.consequent, {},
                status_from_counts(s.rule_counters[r], s.rule_violations[r], rr.arity)};
        for (std::uint32_t i = 0; i < rr.arity; ++i) {
            const Finding& fd = rule.findings[i];
            const auto& f = cm.findings[rr.first_finding + i];
            TraceRow row{{fd.concept_name, fd.property}, fd.polarity, fd.value, std::nullopt,
                         s.finding_mirrors[rr.first_finding + i]};
            if (auto it = s.wm.entries.find(cm.slots[f.slot].key); it != s.wm.entries.end()) {
                row.observed = it->second.value;
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    }
    throw InferenceError(InferenceErrc::UnknownRule,
                         "no rule named '" + std::string(rule_name) + "' in model '" + model.name + "'");
}

std::string escape_html(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_trace_html(const Trace& t) {
    const std::string status = to_string(t.status);
    std::string out;
    out += "<div class=\"rcses-trace\" dir=\"rtl\" data-rule=\"" + escape_html(t.rule) + "\" data-status=\"" +
           status + "\">\n";
    out += "<h3 class=\"consequent\">" + escape_html(t.consequent) + "</h3>\n";
    out += "<table class=\"findings\">\n";
    out += "<thead><tr><th>Concept</th><th>Property</th><th>Condition</th><th>Required</th>"
           "<th>Observed</th><th>Satisfied</th></tr></thead>\n<tbody>\n";
    for (const auto& row : t.rows) {
        out += "<tr class=\"";
        out += row.satisfied ? "satisfied" : (row.observed ? "violated" : "unanswered");
        out += "\"><td>" + escape_html(row.slot.concept_name) + "</td><td>" + escape_html(row.slot.property) +
               "</td><td>" + (row.polarity == Polarity::MustEqual ? "=" : "&#8800;") + "</td><td>" +
               escape_html(row.required) + "</td><td>" + (row.observed ? escape_html(*row.observed) : "unanswered") +
               "</td><td>" + (row.satisfied ? "yes" : "no") + "</td></tr>\n";
    }
    out += "</tbody>\n</table>\n";
    out += "<p class=\"status status-" + status + "\">Status: " + status + "</p>\n";
    out += "</div>\n";
    return out;
}

MatchState current_match_state(const SessionState& s) {
    return {s.finding_mirrors, s.rule_counters, s.rule_violations};
}

MatchState recompute_match_state(const SessionState& s) {
    const CompiledModel& cm = s.compiled();
    MatchState m;
    m.finding_mirrors.assign(cm.findings.size(), false);
    m.rule_counters.assign(cm.rules.size(), 0);
    m.rule_violations.assign(cm.rules.size(), 0);
    for (std::size_t g = 0; g < cm.findings.size(); ++g) {
        const auto& f = cm.findings[g];
        auto it = s.wm.entries.find(cm.slots[f.slot].key);
        if (it == s.wm.entries.end()) continue;
        if (finding_satisfied(f, it->second.value_key)) {
            m.finding_mirrors[g] = true;
            ++m.rule_counters[f.rule];
        } else {
            ++m.rule_violations[f.rule];
        }
    }
    return m;
}

std::map<std::string, std::string> replay_log(const KbSnapshot& kb, const std::vector<LogEntry>& log) {
    std::map<std::string, std::string> wm;
    for (const auto& e : log) {
        const std::string k = kb.slot_key(e.slot.concept_name, e.slot.property);
        if (e.action == LogAction::Retract) wm.erase(k);
        else wm[k] = kb.key(e.value);
    }
    return wm;
}

}  // namespace rcses
