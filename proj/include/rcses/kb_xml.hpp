#pragma once

#include "rcses/issue.hpp"
#include "rcses/knowledge_model.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rcses {

/// Result of reading a knowledge document. `value` is set iff there are no
/// error-severity issues; warnings may accompany a successful parse.
template <class T>
struct ParseOutcome {
    std::optional<T> value;
    IssueList issues;

    bool ok() const { return value.has_value(); }
};

enum class DocumentKind { Ontology, RuleBase };

struct CanonicalDocument {
    std::string bytes;
    DocumentKind kind = DocumentKind::Ontology;
};

/// Reads a KSA_Civil_Ontology document (OntParent/OntChild/OntConcept/OntVal).
/// Names are stored in display form (NFC, whitespace collapsed); sibling
/// uniqueness is checked under `policy`.
ParseOutcome<Ontology> parse_ontology(std::string_view bytes, const NormalizationPolicy& policy = {});

/// Reads a KSA_Civil_Regulation document (Model/Rule/Finding). The persisted
/// NoTrueFinding(s) and ExistInWM attributes are accepted and discarded.
ParseOutcome<RuleBase> parse_rulebase(std::string_view bytes, const NormalizationPolicy& policy = {});

// Canonical form: no XML declaration, 2-space indentation, one element per
// line, schema attribute order, double quotes, self-closing leaves, trailing
// newline.
CanonicalDocument serialize_ontology(const Ontology& ontology);
CanonicalDocument serialize_rulebase(const RuleBase& rulebase);

/// Escapes & < > " (and tab/newline/carriage return as character references).
std::string escape_attribute(std::string_view text);

}  // namespace rcses
