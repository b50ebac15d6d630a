#include "rcses/kb_builder.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace rcses {

std::string to_string(BuilderErrc code) {
    switch (code) {
        case BuilderErrc::PathNotFound: return "PathNotFound";
        case BuilderErrc::DuplicateName: return "DuplicateName";
        case BuilderErrc::LastValue: return "LastValue";
        case BuilderErrc::EmptyRule: return "EmptyRule";
        case BuilderErrc::DuplicateSlot: return "DuplicateSlot";
        case BuilderErrc::EmptyDomain: return "EmptyDomain";
        case BuilderErrc::EmptyName: return "EmptyName";
        case BuilderErrc::BadEdit: return "BadEdit";
    }
    return "BadEdit";
}

namespace {

std::string join(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) out += (out.empty() ? "" : " / ") + p;
    return out;
}

template <class Vec, class NameOf>
auto find_named(Vec& items, const std::string& name, const NormalizationPolicy& policy, NameOf name_of)
    -> decltype(items.begin()) {
    const std::string key = normalize_text(name, policy);
    return std::find_if(items.begin(), items.end(),
                        [&](const auto& item) { return normalize_text(name_of(item), policy) == key; });
}

template <class Vec, class NameOf>
auto& resolve(Vec& items, const std::vector<std::string>& path, std::size_t depth, const NormalizationPolicy& policy,
              NameOf name_of) {
    auto it = find_named(items, path[depth], policy, name_of);
    if (it == items.end()) {
        throw BuilderError(BuilderErrc::PathNotFound, "path not found: " + join({path.begin(), path.begin() + static_cast<std::ptrdiff_t>(depth) + 1}));
    }
    return *it;
}

template <class Vec, class NameOf>
void require_absent(const Vec& items, const std::vector<std::string>& path, const NormalizationPolicy& policy,
                    NameOf name_of) {
    if (find_named(items, path.back(), policy, name_of) != items.end()) {
        throw BuilderError(BuilderErrc::DuplicateName, "already exists: " + join(path));
    }
}

// Rejects the edited value if it breaks a structural invariant.
void reject_invalid(const IssueList& issues) {
    for (const auto& issue : issues) {
        if (issue.severity != Severity::Error) continue;
        BuilderErrc code = BuilderErrc::BadEdit;
        if (issue.code == issue_code::DuplicateName) code = BuilderErrc::DuplicateName;
        else if (issue.code == issue_code::EmptyRule) code = BuilderErrc::EmptyRule;
        else if (issue.code == issue_code::DuplicateSlot) code = BuilderErrc::DuplicateSlot;
        else if (issue.code == issue_code::EmptyDomain) code = BuilderErrc::EmptyDomain;
        else if (issue.code == issue_code::EmptyName) code = BuilderErrc::EmptyName;
        throw BuilderError(code, issue.message + " at " + issue.path);
    }
}

const auto reg_name = [](const Regulation& r) -> const std::string& { return r.name; };
const auto ctx_name = [](const Context& c) -> const std::string& { return c.name; };
const auto concept_name_of = [](const Concept& c) -> const std::string& { return c.name; };
const auto value_name = [](const std::string& v) -> const std::string& { return v; };
const auto model_name = [](const Model& m) -> const std::string& { return m.name; };
const auto rule_name = [](const Rule& r) -> const std::string& { return r.name; };

void require_depth(const std::vector<std::string>& path, std::size_t lo, std::size_t hi, const char* kind) {
    if (path.size() < lo || path.size() > hi) {
        throw BuilderError(BuilderErrc::BadEdit, std::string(kind) + ": path has " + std::to_string(path.size()) +
                                                     " element(s), expected " + std::to_string(lo) +
                                                     (lo == hi ? "" : ".." + std::to_string(hi)));
    }
}

}  // namespace

Ontology apply_ontology_edit(const Ontology& ontology, const OntologyEdit& edit, const NormalizationPolicy& policy) {
    Ontology out = ontology;
    const auto& p = edit.path;
    switch (edit.kind) {
        case OntologyEditKind::AddRegulation:
            require_depth(p, 1, 1, "add-regulation");
            require_absent(out.regulations, p, policy, reg_name);
            out.regulations.push_back({display_text(p[0]), {}});
            break;
        case OntologyEditKind::AddContext: {
            require_depth(p, 2, 2, "add-context");
            auto& reg = resolve(out.regulations, p, 0, policy, reg_name);
            require_absent(reg.contexts, p, policy, ctx_name);
            reg.contexts.push_back({display_text(p[1]), {}});
            break;
        }
        case OntologyEditKind::AddConcept: {
            require_depth(p, 3, 3, "add-concept");
            auto& ctx = resolve(resolve(out.regulations, p, 0, policy, reg_name).contexts, p, 1, policy, ctx_name);
            require_absent(ctx.concepts, p, policy, concept_name_of);
            if (edit.values.empty()) {
                throw BuilderError(BuilderErrc::EmptyDomain, "add-concept needs at least one value: " + join(p));
            }
            Concept c{display_text(p[2]), display_text(edit.property), {}};
            for (const auto& v : edit.values) c.values.push_back(display_text(v));
            ctx.concepts.push_back(std::move(c));
            break;
        }
        case OntologyEditKind::AddValue: {
            require_depth(p, 4, 4, "add-value");
            auto& reg = resolve(out.regulations, p, 0, policy, reg_name);
            auto& ctx = resolve(reg.contexts, p, 1, policy, ctx_name);
            auto& con = resolve(ctx.concepts, p, 2, policy, concept_name_of);
            require_absent(con.values, p, policy, value_name);
            con.values.push_back(display_text(p[3]));
            break;
        }
        case OntologyEditKind::Rename: {
            require_depth(p, 1, 4, "rename");
            std::string name = display_text(edit.new_name);
            auto& reg = resolve(out.regulations, p, 0, policy, reg_name);
            if (p.size() == 1) { reg.name = name; break; }
            auto& ctx = resolve(reg.contexts, p, 1, policy, ctx_name);
            if (p.size() == 2) { ctx.name = name; break; }
            auto& con = resolve(ctx.concepts, p, 2, policy, concept_name_of);
            if (p.size() == 3) { con.name = name; break; }
            resolve(con.values, p, 3, policy, value_name) = name;
            break;
        }
        case OntologyEditKind::Delete: {
            require_depth(p, 1, 4, "delete");
            auto& regs = out.regulations;
            auto& reg = resolve(regs, p, 0, policy, reg_name);
            if (p.size() == 1) { regs.erase(find_named(regs, p[0], policy, reg_name)); break; }
            auto& ctx = resolve(reg.contexts, p, 1, policy, ctx_name);
            if (p.size() == 2) { reg.contexts.erase(find_named(reg.contexts, p[1], policy, ctx_name)); break; }
            auto& con = resolve(ctx.concepts, p, 2, policy, concept_name_of);
            if (p.size() == 3) { ctx.concepts.erase(find_named(ctx.concepts, p[2], policy, concept_name_of)); break; }
            resolve(con.values, p, 3, policy, value_name);
            if (con.values.size() == 1) {
                throw BuilderError(BuilderErrc::LastValue, "cannot delete the only value of '" + con.name + "'");
            }
            con.values.erase(find_named(con.values, p[3], policy, value_name));
            break;
        }
    }
    reject_invalid(validate_ontology(out, policy));
    return out;
}

RuleBase apply_rule_edit(const RuleBase& rulebase, const RuleEdit& edit, const NormalizationPolicy& policy) {
    RuleBase out = rulebase;
    const auto& p = edit.path;
    auto normalized = [](Finding f) {
        f.concept_name = display_text(f.concept_name);
        f.property = display_text(f.property);
        f.value = display_text(f.value);
        return f;
    };
    switch (edit.kind) {
        case RuleEditKind::AddModel:
            require_depth(p, 1, 1, "add-model");
            require_absent(out.models, p, policy, model_name);
            out.models.push_back({display_text(p[0]), {}});
            break;
        case RuleEditKind::AddRule: {
            require_depth(p, 2, 2, "add-rule");
            auto& model = resolve(out.models, p, 0, policy, model_name);
            require_absent(model.rules, p, policy, rule_name);
            if (edit.findings.empty()) {
                throw BuilderError(BuilderErrc::EmptyRule, "add-rule needs at least one finding: " + join(p));
            }
            Rule rule{display_text(p[1]), display_text(edit.consequent), {}};
            for (const auto& f : edit.findings) rule.findings.push_back(normalized(f));
            model.rules.push_back(std::move(rule));
            break;
        }
        case RuleEditKind::AddFinding: {
            require_depth(p, 2, 2, "add-finding");
            if (edit.findings.empty()) throw BuilderError(BuilderErrc::BadEdit, "add-finding without a finding");
            auto& rule = resolve(resolve(out.models, p, 0, policy, model_name).rules, p, 1, policy, rule_name);
            for (const auto& f : edit.findings) rule.findings.push_back(normalized(f));
            break;
        }
        case RuleEditKind::SetConsequent: {
            require_depth(p, 2, 2, "set-consequent");
            auto& rule = resolve(resolve(out.models, p, 0, policy, model_name).rules, p, 1, policy, rule_name);
            rule.consequent = display_text(edit.consequent);
            break;
        }
        case RuleEditKind::Rename: {
            require_depth(p, 1, 2, "rename");
            auto& model = resolve(out.models, p, 0, policy, model_name);
            if (p.size() == 1) model.name = display_text(edit.new_name);
            else resolve(model.rules, p, 1, policy, rule_name).name = display_text(edit.new_name);
            break;
        }
        case RuleEditKind::Delete: {
            require_depth(p, 1, 2, "delete");
            auto& model = resolve(out.models, p, 0, policy, model_name);
            if (p.size() == 1) {
                if (edit.finding) throw BuilderError(BuilderErrc::BadEdit, "finding index needs a rule path");
                out.models.erase(find_named(out.models, p[0], policy, model_name));
                break;
            }
            auto& rule = resolve(model.rules, p, 1, policy, rule_name);
            if (!edit.finding) {
                model.rules.erase(find_named(model.rules, p[1], policy, rule_name));
                break;
            }
            if (*edit.finding < 1 || *edit.finding > rule.findings.size()) {
                throw BuilderError(BuilderErrc::PathNotFound, "rule '" + rule.name + "' has no finding #" +
                                                                  std::to_string(*edit.finding));
            }
            rule.findings.erase(rule.findings.begin() + static_cast<std::ptrdiff_t>(*edit.finding - 1));
            break;
        }
    }
    reject_invalid(validate_rulebase(out, policy));
    return out;
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw KbIoError(std::filesystem::exists(file) ? "IoError" : "MissingFile",
                        "cannot read " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KbDirectory load_kb_dir(const std::filesystem::path& dir, const NormalizationPolicy& policy) {
    for (const char* name : {kOntologyFile, kRulesFile}) {
        if (!std::filesystem::is_regular_file(dir / name)) {
            throw KbIoError("MissingFile", "missing " + (dir / name).string());
        }
    }
    return {parse_ontology(read_file(dir / kOntologyFile), policy), parse_rulebase(read_file(dir / kRulesFile), policy)};
}

void write_file_atomic(const std::filesystem::path& file, const std::string& bytes) {
    std::random_device rd;
    const auto tmp = file.parent_path() / ("." + file.filename().string() + ".tmp" + std::to_string(rd()));
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw KbIoError("IoError", "cannot create " + tmp.string() + ": " + std::strerror(errno));
    std::size_t written = 0;
    while (written < bytes.size()) {
        ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            int err = errno;
            ::close(fd);
            ::unlink(tmp.c_str());
            throw KbIoError("IoError", "write failed for " + tmp.string() + ": " + std::strerror(err));
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
        ::unlink(tmp.c_str());
        throw KbIoError("IoError", "cannot flush " + tmp.string());
    }
    if (::rename(tmp.c_str(), file.c_str()) != 0) {
        int err = errno;
        ::unlink(tmp.c_str());
        throw KbIoError("IoError", "cannot replace " + file.string() + ": " + std::strerror(err));
    }
}

void save_kb_dir(const std::filesystem::path& dir, const Ontology& ontology, const RuleBase& rulebase) {
    write_file_atomic(dir / kOntologyFile, serialize_ontology(ontology).bytes);
    write_file_atomic(dir / kRulesFile, serialize_rulebase(rulebase).bytes);
}

KbDirLock::KbDirLock(const std::filesystem::path& dir) {
    const auto lock = dir / ".rcses.lock";
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw KbIoError("IoError", "cannot open lock file " + lock.string());
    while (::flock(fd_, LOCK_EX) != 0) {
        if (errno != EINTR) {
            ::close(fd_);
            throw KbIoError("IoError", "cannot lock " + lock.string());
        }
    }
}

KbDirLock::~KbDirLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

LintOutcome lint_kb(const std::filesystem::path& dir, const NormalizationPolicy& policy) {
    LintOutcome out;
    KbDirectory kb;
    try {
        kb = load_kb_dir(dir, policy);
    } catch (const KbIoError& e) {
        out.io_error = e.code();
        out.io_message = e.what();
        out.exit_code = 2;
        return out;
    }
    out.ontology_issues = kb.ontology.issues;
    out.rules_issues = kb.rules.issues;
    if (kb.ok()) out.report = check_rulebase(*kb.rules.value, *kb.ontology.value, policy);
    const bool failed = !kb.ok() || out.report.error_count() > 0;
    out.exit_code = failed ? 1 : 0;
    return out;
}

}  // namespace rcses
