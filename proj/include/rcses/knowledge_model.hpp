#pragma once

#include "rcses/issue.hpp"
#include "rcses/normalize.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rcses {

inline constexpr const char* kDefaultProperty = "Value";

// Ontology: regulation -> context -> concept -> values.

struct Concept {
    std::string name;
    std::string property = kDefaultProperty;
    std::vector<std::string> values;

    friend bool operator==(const Concept&, const Concept&) = default;
};

struct Context {
    std::string name;
    std::vector<Concept> concepts;

    friend bool operator==(const Context&, const Context&) = default;
};

struct Regulation {
    std::string name;
    std::vector<Context> contexts;

    friend bool operator==(const Regulation&, const Regulation&) = default;
};

struct Ontology {
    std::vector<Regulation> regulations;

    friend bool operator==(const Ontology&, const Ontology&) = default;
};

// Rulebase: model -> rule -> findings (the rule antecedent).

enum class Polarity { MustEqual, MustDiffer };

struct Finding {
    std::string concept_name;
    std::string property = kDefaultProperty;
    std::string value;
    Polarity polarity = Polarity::MustEqual;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct Rule {
    std::string name;
    std::string consequent;
    std::vector<Finding> findings;

    friend bool operator==(const Rule&, const Rule&) = default;
};

struct Model {
    std::string name;
    std::vector<Rule> rules;

    friend bool operator==(const Model&, const Model&) = default;
};

struct RuleBase {
    std::vector<Model> models;

    friend bool operator==(const RuleBase&, const RuleBase&) = default;
};

/// One occurrence of a concept in the ontology tree.
struct ConceptRef {
    const Regulation* regulation = nullptr;
    const Context* context = nullptr;
    const Concept* concept_ptr = nullptr;
};

/// Identity test for KB names: equal iff the normalized forms are byte-equal.
bool same_name(std::string_view a, std::string_view b, const NormalizationPolicy& policy);

std::vector<std::string> list_models(const RuleBase& rulebase);

/// Every occurrence of the concept, document order. `concept_name` is compared
/// after normalization under `policy`.
std::vector<ConceptRef> lookup_concept(const Ontology& ontology, std::string_view concept_name,
                                       const NormalizationPolicy& policy = {});

const std::vector<std::string>& value_domain(const Concept& c);

std::size_t rule_arity(const Rule& rule);

const Model* find_model(const RuleBase& rulebase, std::string_view name,
                        const NormalizationPolicy& policy = {});
const Rule* find_rule(const Model& model, std::string_view name,
                      const NormalizationPolicy& policy = {});

// Canonical element paths, 1-based indices.
std::string ontology_path(std::size_t regulation);
std::string ontology_path(std::size_t regulation, std::size_t context);
std::string ontology_path(std::size_t regulation, std::size_t context, std::size_t concept_index);
std::string ontology_path(std::size_t regulation, std::size_t context, std::size_t concept_index,
                          std::size_t value);
std::string rulebase_path(std::size_t model);
std::string rulebase_path(std::size_t model, std::size_t rule);
std::string rulebase_path(std::size_t model, std::size_t rule, std::size_t finding);

/// Single structural validation pass: non-empty names, sibling uniqueness,
/// non-empty value domains. Paths are canonical element paths.
IssueList validate_ontology(const Ontology& ontology, const NormalizationPolicy& policy = {});

/// Non-empty names, unique model/rule names, at least one finding per rule,
/// no duplicate (concept, property) slot inside a rule.
IssueList validate_rulebase(const RuleBase& rulebase, const NormalizationPolicy& policy = {});

}  // namespace rcses
