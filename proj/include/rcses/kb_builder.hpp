#pragma once

// Authoring edits over the ontology and rulebase, plus the on-disk KB
// directory (ontology.xml + rules.xml).

#include "rcses/issue.hpp"
#include "rcses/kb_xml.hpp"
#include "rcses/knowledge_model.hpp"
#include "rcses/lexicon_check.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcses {

enum class BuilderErrc {
    PathNotFound,
    DuplicateName,
    LastValue,
    EmptyRule,
    DuplicateSlot,
    EmptyDomain,
    EmptyName,
    BadEdit,
};

std::string to_string(BuilderErrc code);

class BuilderError : public std::runtime_error {
public:
    BuilderError(BuilderErrc code, std::string message) : std::runtime_error(std::move(message)), code_(code) {}
    BuilderErrc code() const noexcept { return code_; }

private:
    BuilderErrc code_;
};

enum class OntologyEditKind { AddRegulation, AddContext, AddConcept, AddValue, Rename, Delete };
enum class RuleEditKind { AddModel, AddRule, AddFinding, SetConsequent, Rename, Delete };

/// `path` is (regulation[, context[, concept[, value]]]). For add-* kinds the
/// last element is the new name and must not exist yet.
struct OntologyEdit {
    OntologyEditKind kind = OntologyEditKind::AddRegulation;
    std::vector<std::string> path;
    std::string new_name;                      // rename
    std::string property = kDefaultProperty;   // add-concept
    std::vector<std::string> values;           // add-concept, at least one
};

/// `path` is (model[, rule]); `finding` selects a finding (1-based) for delete.
struct RuleEdit {
    RuleEditKind kind = RuleEditKind::AddModel;
    std::vector<std::string> path;
    std::string new_name;                 // rename
    std::string consequent;               // add-rule, set-consequent
    std::vector<Finding> findings;        // add-rule (>= 1), add-finding
    std::optional<std::size_t> finding;   // delete a single finding
};

Ontology apply_ontology_edit(const Ontology& ontology, const OntologyEdit& edit,
                             const NormalizationPolicy& policy = {});
RuleBase apply_rule_edit(const RuleBase& rulebase, const RuleEdit& edit, const NormalizationPolicy& policy = {});

// --- KB directory --------------------------------------------------------

inline constexpr const char* kOntologyFile = "ontology.xml";
inline constexpr const char* kRulesFile = "rules.xml";

class KbIoError : public std::runtime_error {
public:
    KbIoError(std::string code, std::string message)
        : std::runtime_error(std::move(message)), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;  // MissingFile | IoError
};

struct KbDirectory {
    ParseOutcome<Ontology> ontology;
    ParseOutcome<RuleBase> rules;

    bool ok() const { return ontology.ok() && rules.ok(); }
};

/// Reads and parses both documents. Throws KbIoError("MissingFile") when a
/// file is absent; parse problems are returned, not thrown.
KbDirectory load_kb_dir(const std::filesystem::path& dir, const NormalizationPolicy& policy = {});

std::string read_file(const std::filesystem::path& file);

/// Writes via a temporary file in the same directory, fsync, then rename.
void write_file_atomic(const std::filesystem::path& file, const std::string& bytes);

/// Writes both canonical documents atomically (one file at a time).
void save_kb_dir(const std::filesystem::path& dir, const Ontology& ontology, const RuleBase& rulebase);

/// Exclusive advisory lock (flock) on <dir>/.rcses.lock for the object's lifetime.
class KbDirLock {
public:
    explicit KbDirLock(const std::filesystem::path& dir);
    ~KbDirLock();
    KbDirLock(const KbDirLock&) = delete;
    KbDirLock& operator=(const KbDirLock&) = delete;

private:
    int fd_ = -1;
};

struct LintOutcome {
    LintReport report;
    IssueList ontology_issues;
    IssueList rules_issues;
    std::optional<std::string> io_error;  // "MissingFile" etc.
    std::string io_message;
    int exit_code = 0;  // 0 clean, 1 error-severity findings, 2 IO
};

LintOutcome lint_kb(const std::filesystem::path& dir, const NormalizationPolicy& policy = {});

}  // namespace rcses
