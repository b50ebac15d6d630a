#pragma once

// Cross-reference check between a rulebase and its ontology: every finding's
// concept, property and value must resolve against the ontology vocabulary.

#include "rcses/issue.hpp"
#include "rcses/knowledge_model.hpp"
#include "rcses/normalize.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rcses {

namespace lint_code {
inline constexpr const char* UnknownConcept = "UnknownConcept";
inline constexpr const char* UnknownProperty = "UnknownProperty";
inline constexpr const char* UnknownValue = "UnknownValue";
inline constexpr const char* AmbiguousConcept = "AmbiguousConcept";
}  // namespace lint_code

struct LintViolation {
    Severity severity = Severity::Error;
    std::string code;
    std::string model;
    std::string rule;
    std::size_t finding = 0;  // 1-based within the rule
    std::string path;         // element path of the Finding
    std::string token;        // offending text
    std::vector<std::string> suggestions;
    std::string message;
};

struct LintReport {
    std::vector<LintViolation> violations;
    std::map<std::string, std::size_t> counts;  // by code

    bool empty() const { return violations.empty(); }
    std::size_t error_count() const;
    std::size_t warning_count() const;
    std::size_t count(std::string_view code) const;
};

LintReport check_rulebase(const RuleBase& rulebase, const Ontology& ontology, const NormalizationPolicy& policy = {});

/// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Ranks `candidates` (document order) by edit distance to `token` on
/// normalized forms; keeps those within max(2, ceil(len/4)) and returns up to k.
std::vector<std::string> rank_candidates(std::string_view token, const std::vector<std::string>& candidates,
                                         const NormalizationPolicy& policy, std::size_t k);

/// Candidate concept and value names from the ontology closest to `token`.
std::vector<std::string> suggest_corrections(std::string_view token, const Ontology& ontology,
                                             const NormalizationPolicy& policy, std::size_t k);

/// One line per violation plus a summary line.
std::string format_report(const LintReport& report);

}  // namespace rcses
