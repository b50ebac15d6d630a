#pragma once

#include "rcses/knowledge_model.hpp"
#include "rcses/normalize.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rcses {

/// Match index for one model: findings flattened in document order, slots
/// interned in order of first occurrence.
struct CompiledModel {
    struct FindingRef {
        std::uint32_t slot = 0;
        std::uint32_t rule = 0;
        std::string value_key;
        Polarity polarity = Polarity::MustEqual;
    };
    struct RuleRef {
        std::uint32_t first_finding = 0;
        std::uint32_t arity = 0;
    };
    struct SlotRef {
        std::string key;
        std::string concept_name;  // display form of the first occurrence
        std::string property;
        std::vector<std::uint32_t> findings;  // global finding indices
    };

    std::vector<FindingRef> findings;
    std::vector<RuleRef> rules;
    std::vector<SlotRef> slots;
    std::unordered_map<std::string, std::uint32_t> slot_index;
};

/// Ontology view keyed by normalized concept name. A concept that occurs in
/// several contexts merges its properties and value domains.
struct OntologyIndex {
    struct Entry {
        std::vector<std::string> property_keys;
        std::vector<std::string> domain;  // display form, document order, deduplicated
        std::unordered_set<std::string> domain_keys;
    };
    std::unordered_map<std::string, Entry> concepts;

    const Entry* find(const std::string& concept_key) const;
};

/// Immutable, versioned (ontology, rulebase) pair. Sessions pin one snapshot.
class KbSnapshot {
public:
    KbSnapshot(Ontology ontology, RuleBase rulebase, std::uint64_t version, NormalizationPolicy policy = {});

    const Ontology& ontology() const { return ontology_; }
    const RuleBase& rulebase() const { return rulebase_; }
    std::uint64_t version() const { return version_; }
    const std::string& fingerprint() const { return fingerprint_; }
    const NormalizationPolicy& policy() const { return policy_; }

    const OntologyIndex& ontology_index() const { return ontology_index_; }
    const CompiledModel& compiled(std::size_t model_index) const { return compiled_.at(model_index); }

    /// Index of the model with this (normalized) name, or -1.
    std::ptrdiff_t model_index(std::string_view name) const;

    std::string key(std::string_view text) const { return normalize_text(text, policy_); }
    std::string slot_key(std::string_view concept_name, std::string_view property) const;

private:
    Ontology ontology_;
    RuleBase rulebase_;
    std::uint64_t version_;
    NormalizationPolicy policy_;
    std::string fingerprint_;
    OntologyIndex ontology_index_;
    std::vector<CompiledModel> compiled_;
};

using KbSnapshotPtr = std::shared_ptr<const KbSnapshot>;

KbSnapshotPtr make_snapshot(Ontology ontology, RuleBase rulebase, std::uint64_t version,
                            NormalizationPolicy policy = {});

/// Lowercase hex SHA-256 of the canonical ontology and rulebase serializations.
std::string kb_fingerprint(const Ontology& ontology, const RuleBase& rulebase);

}  // namespace rcses
