#pragma once

// Consultation engine: working-memory manager, matcher and result browser,
// plus next-question selection for the interactive wizard.

#include "rcses/snapshot.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcses {

enum class InferenceErrc { UnknownModel, UnknownSlot, UnknownValue, StaleKb, NotAnswered, UnknownRule };

std::string to_string(InferenceErrc code);

struct Slot {
    std::string concept_name;
    std::string property;

    friend bool operator==(const Slot&, const Slot&) = default;
};

class InferenceError : public std::runtime_error {
public:
    InferenceError(InferenceErrc code, std::string message, std::optional<Slot> slot = std::nullopt)
        : std::runtime_error(std::move(message)), code_(code), slot_(std::move(slot)) {}

    InferenceErrc code() const noexcept { return code_; }
    const std::optional<Slot>& slot() const noexcept { return slot_; }

private:
    InferenceErrc code_;
    std::optional<Slot> slot_;
};

enum class LogAction { Assert, Replace, Retract };

std::string to_string(LogAction action);

struct WmEntry {
    Slot slot;
    std::string value;      // display form
    std::string value_key;  // normalized
};

struct LogEntry {
    Slot slot;
    std::string value;  // empty for retract
    LogAction action = LogAction::Assert;
};

/// User-asserted findings keyed by normalized slot; one value per slot.
struct WorkingMemory {
    std::map<std::string, WmEntry> entries;
    std::vector<LogEntry> log;
};

struct SessionState {
    std::string id;
    KbSnapshotPtr kb;
    std::uint64_t kb_version = 0;
    std::string model_name;
    std::size_t model_index = 0;
    WorkingMemory wm;

    // Live match state. finding_mirrors is indexed by the model's flattened
    // finding order; rule_counters counts satisfied findings per rule and
    // rule_violations counts answered-but-unsatisfied findings.
    std::vector<bool> finding_mirrors;
    std::vector<std::uint32_t> rule_counters;
    std::vector<std::uint32_t> rule_violations;
    std::vector<bool> slot_answered;

    std::int64_t created_at = 0;
    std::int64_t last_active = 0;

    const Model& model() const { return kb->rulebase().models[model_index]; }
    const CompiledModel& compiled() const { return kb->compiled(model_index); }
};

/// Mirror/counter state recomputed from the KB and working memory alone.
struct MatchState {
    std::vector<bool> finding_mirrors;
    std::vector<std::uint32_t> rule_counters;
    std::vector<std::uint32_t> rule_violations;

    friend bool operator==(const MatchState&, const MatchState&) = default;
};

enum class RuleStatus { Sure, Expected, Excluded };

std::string to_string(RuleStatus status);

struct SureResult {
    std::string rule;
    std::string consequent;
};

struct ExpectedResult {
    std::string rule;
    std::string consequent;
    std::vector<Slot> unanswered;
};

struct ExcludedResult {
    std::string rule;
    std::string consequent;
    std::vector<Slot> violated;
};

struct EvaluationResult {
    std::vector<SureResult> sure;
    std::vector<ExpectedResult> expected;
    std::vector<ExcludedResult> excluded;
    std::uint64_t kb_version = 0;

    /// Status of a rule by name, or nullopt if it is in none of the lists.
    std::optional<RuleStatus> status_of(std::string_view rule) const;
};

struct Question {
    Slot slot;
    std::vector<std::string> domain;  // ontology values; empty if the concept is not in the ontology
    std::uint32_t score = 0;          // number of Expected rules that test the slot
};

struct TraceRow {
    Slot slot;
    Polarity polarity = Polarity::MustEqual;
    std::string required;
    std::optional<std::string> observed;  // nullopt = unanswered
    bool satisfied = false;
};

struct Trace {
    std::string rule;
    std::string consequent;
    std::vector<TraceRow> rows;
    RuleStatus status = RuleStatus::Expected;
};

struct AssertOptions {
    /// When set, fail with StaleKb unless the session is pinned to this version.
    std::optional<std::uint64_t> require_kb_version;
};

SessionState new_session(KbSnapshotPtr kb, std::string_view model_name, std::string id = {},
                         std::int64_t now = 0);

/// Sets the slot (replacing any previous answer) and updates the affected
/// mirrors and counters. On error the session is unchanged.
void assert_finding(SessionState& session, std::string_view concept_name, std::string_view property,
                    std::string_view value, const AssertOptions& options = {});

void retract_finding(SessionState& session, std::string_view concept_name, std::string_view property);

EvaluationResult evaluate(const SessionState& session);

std::vector<Question> next_questions(const SessionState& session, std::size_t k);

Trace explain(const SessionState& session, std::string_view rule_name);

std::string render_trace_html(const Trace& trace);

/// From-scratch recomputation of the match state (reference for the incremental path).
MatchState recompute_match_state(const SessionState& session);
MatchState current_match_state(const SessionState& session);

/// Replays an assertion log into a working-memory map (slot key -> value key).
std::map<std::string, std::string> replay_log(const KbSnapshot& kb, const std::vector<LogEntry>& log);

std::string escape_html(std::string_view text);

}  // namespace rcses
