// rcses-kb: lint, edit, format and inspect a KB directory.
// Exit codes: 0 ok, 1 violations or rejected edits, 2 usage or IO errors.

#include "rcses/json_io.hpp"
#include "rcses/kb_builder.hpp"
#include "rcses/kb_xml.hpp"
#include "rcses/lexicon_check.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;

void print_issues(const char* file, const rcses::IssueList& issues) {
    for (const auto& i : issues) {
        std::cout << file << ": " << rcses::to_string(i.severity) << " " << i.code << " " << i.path << ": "
                  << i.message << "\n";
    }
}

int run_lint(const std::string& dir, bool json) {
    rcses::LintOutcome out = rcses::lint_kb(dir);
    if (json) {
        rcses::Json j = {{"ontology_issues", rcses::to_json(out.ontology_issues)},
                         {"rules_issues", rcses::to_json(out.rules_issues)},
                         {"report", rcses::to_json(out.report)},
                         {"exit_code", out.exit_code}};
        if (out.io_error) j["io_error"] = {{"code", *out.io_error}, {"message", out.io_message}};
        std::cout << rcses::dump_json(j, 2) << "\n";
        return out.exit_code;
    }
    if (out.io_error) {
        std::cerr << *out.io_error << ": " << out.io_message << "\n";
        return out.exit_code;
    }
    print_issues(rcses::kOntologyFile, out.ontology_issues);
    print_issues(rcses::kRulesFile, out.rules_issues);
    std::cout << rcses::format_report(out.report);
    return out.exit_code;
}

// Loads the KB or prints the parse problems; returns nullopt on failure.
std::optional<rcses::KbDirectory> load_or_report(const std::string& dir) {
    rcses::KbDirectory kb = rcses::load_kb_dir(dir);
    if (!kb.ok()) {
        print_issues(rcses::kOntologyFile, kb.ontology.issues);
        print_issues(rcses::kRulesFile, kb.rules.issues);
        return std::nullopt;
    }
    return kb;
}

int run_edit(const std::string& dir, const std::string& edit_file) {
    rcses::KbDirLock lock(dir);
    auto kb = load_or_report(dir);
    if (!kb) return kViolations;

    rcses::Json records = rcses::Json::parse(rcses::read_file(edit_file), nullptr, false);
    if (records.is_discarded()) {
        std::cerr << edit_file << ": not valid JSON\n";
        return kUsage;
    }

    std::vector<rcses::KbEdit> edits;
    try {
        edits = rcses::edits_from_json(records);
    } catch (const rcses::BuilderError& e) {
        std::cerr << edit_file << ": " << e.what() << "\n";
        return kUsage;
    }

    rcses::Ontology ontology = *kb->ontology.value;
    rcses::RuleBase rules = *kb->rules.value;
    bool ontology_changed = false;
    bool rules_changed = false;
    for (std::size_t i = 0; i < edits.size(); ++i) {
        try {
            if (const auto* e = std::get_if<rcses::OntologyEdit>(&edits[i])) {
                ontology = rcses::apply_ontology_edit(ontology, *e);
                ontology_changed = true;
            } else {
                rules = rcses::apply_rule_edit(rules, std::get<rcses::RuleEdit>(edits[i]));
                rules_changed = true;
            }
        } catch (const rcses::BuilderError& e) {
            std::cerr << "edit #" << i + 1 << " rejected: " << rcses::to_string(e.code()) << ": " << e.what()
                      << "\nno files were changed\n";
            return kViolations;
        }
    }

    if (ontology_changed) {
        rcses::write_file_atomic(std::filesystem::path(dir) / rcses::kOntologyFile,
                                 rcses::serialize_ontology(ontology).bytes);
    }
    if (rules_changed) {
        rcses::write_file_atomic(std::filesystem::path(dir) / rcses::kRulesFile, rcses::serialize_rulebase(rules).bytes);
    }
    std::cout << "applied " << edits.size() << " edit(s)\n";
    return kOk;
}

int run_fmt(const std::string& dir) {
    rcses::KbDirLock lock(dir);
    auto kb = load_or_report(dir);
    if (!kb) return kViolations;
    rcses::save_kb_dir(dir, *kb->ontology.value, *kb->rules.value);
    return kOk;
}

int run_show(const std::string& dir, const std::string& model_filter) {
    auto kb = load_or_report(dir);
    if (!kb) return kViolations;
    const rcses::RuleBase& rules = *kb->rules.value;
    if (model_filter.empty()) {
        const rcses::Ontology& ont = *kb->ontology.value;
        std::cout << "ontology: " << ont.regulations.size() << " regulation(s)\n";
        for (const auto& reg : ont.regulations) {
            std::cout << "  " << reg.name << "\n";
            for (const auto& ctx : reg.contexts) {
                std::cout << "    " << ctx.name << "\n";
                for (const auto& con : ctx.concepts) {
                    std::cout << "      " << con.name << " {";
                    for (std::size_t i = 0; i < con.values.size(); ++i) std::cout << (i ? ", " : "") << con.values[i];
                    std::cout << "}\n";
                }
            }
        }
    }
    bool shown = false;
    for (const auto& model : rules.models) {
        if (!model_filter.empty() && !rcses::same_name(model.name, model_filter, {})) continue;
        shown = true;
        std::cout << "model: " << model.name << " (" << model.rules.size() << " rule(s))\n";
        for (const auto& rule : model.rules) {
            std::cout << "  " << rule.name << ": IF ";
            for (std::size_t i = 0; i < rule.findings.size(); ++i) {
                const auto& f = rule.findings[i];
                std::cout << (i ? " AND " : "") << f.concept_name << "." << f.property
                          << (f.polarity == rcses::Polarity::MustEqual ? " = " : " != ") << f.value;
            }
            std::cout << " THEN " << rule.consequent << "\n";
        }
    }
    if (!model_filter.empty() && !shown) {
        std::cerr << "no model named '" << model_filter << "'\n";
        return kUsage;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-base builder: lint, edit, fmt, show"};
    app.require_subcommand(1);

    std::string dir;
    bool json = false;
    std::string edit_file;
    std::string model;

    auto* lint = app.add_subcommand("lint", "check rule references against the ontology");
    lint->add_option("dir", dir, "KB directory")->required();
    lint->add_flag("--json", json, "print the report as JSON");

    auto* edit = app.add_subcommand("edit", "apply a JSON array of edit records");
    edit->add_option("dir", dir, "KB directory")->required();
    edit->add_option("--edit-file", edit_file, "JSON edit file")->required();

    auto* fmt = app.add_subcommand("fmt", "rewrite both documents in canonical form");
    fmt->add_option("dir", dir, "KB directory")->required();

    auto* show = app.add_subcommand("show", "print the ontology and rules");
    show->add_option("dir", dir, "KB directory")->required();
    show->add_option("--model", model, "only this model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*lint) return run_lint(dir, json);
        if (*edit) return run_edit(dir, edit_file);
        if (*fmt) return run_fmt(dir);
        if (*show) return run_show(dir, model);
    } catch (const rcses::KbIoError& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
