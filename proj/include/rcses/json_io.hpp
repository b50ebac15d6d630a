#pragma once

#include "rcses/inference.hpp"
#include "rcses/issue.hpp"
#include "rcses/kb_builder.hpp"
#include "rcses/lexicon_check.hpp"

#include <json.hpp>

#include <variant>
#include <vector>

namespace rcses {

using Json = nlohmann::json;

Json to_json(const ParseIssue& issue);
Json to_json(const IssueList& issues);
Json to_json(const LintReport& report);
Json to_json(const Slot& slot);
Json to_json(const EvaluationResult& result);
Json to_json(const std::vector<Question>& questions);

/// UTF-8 output with non-ASCII left unescaped; invalid bytes are replaced.
std::string dump_json(const Json& j, int indent = -1);

using KbEdit = std::variant<OntologyEdit, RuleEdit>;

/// Parses one edit record, e.g.
///   {"target":"ontology","kind":"add-value","path":[reg, ctx, concept, value]}
///   {"target":"rules","kind":"add-rule","path":[model, rule],"consequent":"...",
///    "findings":[{"concept":"...","property":"Value","value":"...","equal":"Yes"}]}
/// Throws BuilderError(BadEdit) on malformed records.
KbEdit edit_from_json(const Json& record);
std::vector<KbEdit> edits_from_json(const Json& array);

}  // namespace rcses
