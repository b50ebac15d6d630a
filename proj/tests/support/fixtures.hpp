#pragma once

#include "rcses/kb_builder.hpp"
#include "rcses/kb_xml.hpp"
#include "rcses/snapshot.hpp"

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

namespace rcses::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(RCSES_FIXTURE_DIR) / name;
}

inline std::string fixture(const std::string& name) { return read_file(fixture_path(name)); }

inline Ontology appointment_ontology() {
    auto r = parse_ontology(fixture("appointment_ontology.xml"));
    if (!r.ok()) throw std::runtime_error("appointment fixture does not parse");
    return *r.value;
}

inline Ontology augmented_ontology() {
    auto r = parse_ontology(fixture("augmented_ontology.xml"));
    if (!r.ok()) throw std::runtime_error("augmented fixture does not parse");
    return *r.value;
}

inline RuleBase termination_rules() {
    auto r = parse_rulebase(fixture("termination_rules.xml"));
    if (!r.ok()) throw std::runtime_error("termination fixture does not parse");
    return *r.value;
}

inline KbSnapshotPtr fixture_kb(bool augmented = false) {
    return make_snapshot(augmented ? augmented_ontology() : appointment_ontology(), termination_rules(), 1);
}

// Termination-model strings used across suites.
inline const std::string kModel = "إنهاء الخدمة";
inline const std::string kR1Concept = "الإستقالة";
inline const std::string kR1Value = "تقديم الإستقالة وقبولها";
inline const std::string kR1Consequent = "إنهاء الخدمة بالإستقالة";
inline const std::string kR2Concept = "طلب الإحالة على التقاعد قبل بلوغ السن النظامية";
inline const std::string kR2Value = "تقديم الطلب قبل بلوغ السن النظامية وقبوله";
inline const std::string kR2Consequent = "إنهاء الخدمة بطلب الإحالة على التقاعد";

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("rcses-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Copies the named fixtures into `dir` as ontology.xml / rules.xml.
inline void install_kb(const std::filesystem::path& dir, const std::string& ontology_fixture = "appointment_ontology.xml",
                       const std::string& rules_fixture = "termination_rules.xml") {
    std::filesystem::copy_file(fixture_path(ontology_fixture), dir / kOntologyFile,
                               std::filesystem::copy_options::overwrite_existing);
    std::filesystem::copy_file(fixture_path(rules_fixture), dir / kRulesFile,
                               std::filesystem::copy_options::overwrite_existing);
}

}  // namespace rcses::testing
