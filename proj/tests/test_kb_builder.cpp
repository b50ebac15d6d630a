#include "rcses/kb_builder.hpp"

#include "rcses/inference.hpp"
#include "support/fixtures.hpp"
#include "support/random_kb.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rcses;
using namespace rcses::testing;

namespace {

const std::string kReg = "التعيين في الوظائف العامة";
const std::string kCtx = "التوظيف في وظائف المرتبة السادسة حتي العاشرة - مؤقت";

BuilderErrc error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const BuilderError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no BuilderError thrown";
    return BuilderErrc::BadEdit;
}

OntologyEdit oedit(OntologyEditKind kind, std::vector<std::string> path) {
    OntologyEdit e;
    e.kind = kind;
    e.path = std::move(path);
    return e;
}

RuleEdit redit(RuleEditKind kind, std::vector<std::string> path) {
    RuleEdit e;
    e.kind = kind;
    e.path = std::move(path);
    return e;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace

TEST(OntologyEdit, AddValue) {
    const Ontology before = appointment_ontology();
    Ontology after = apply_ontology_edit(before, oedit(OntologyEditKind::AddValue, {kReg, kCtx, "الإعلان", "معلق"}));
    EXPECT_EQ(after.regulations[0].contexts[0].concepts[0].values.size(), 3u);
    EXPECT_EQ(after.regulations[0].contexts[0].concepts[0].values.back(), "معلق");
    EXPECT_EQ(before, appointment_ontology());
}

TEST(OntologyEdit, DuplicateAndMissingPaths) {
    const Ontology ont = appointment_ontology();
    OntologyEdit dup = oedit(OntologyEditKind::AddConcept, {kReg, kCtx, "الإعلان"});
    dup.values = {"x"};
    EXPECT_EQ(error_of([&] { apply_ontology_edit(ont, dup); }), BuilderErrc::DuplicateName);
    EXPECT_EQ(error_of([&] { apply_ontology_edit(ont, oedit(OntologyEditKind::AddValue, {kReg, "nowhere", "الإعلان", "v"})); }),
              BuilderErrc::PathNotFound);
    EXPECT_EQ(error_of([&] { apply_ontology_edit(ont, oedit(OntologyEditKind::AddValue, {kReg, kCtx, "الإعلان", "يوجد اعلان"})); }),
              BuilderErrc::DuplicateName);
    EXPECT_EQ(error_of([&] { apply_ontology_edit(ont, oedit(OntologyEditKind::AddRegulation, {})); }), BuilderErrc::BadEdit);
}

TEST(OntologyEdit, DeleteValueRemovesLine) {
    const Ontology ont = appointment_ontology();
    Ontology after = apply_ontology_edit(ont, oedit(OntologyEditKind::Delete, {kReg, kCtx, "الإعلان", "يوجد إعلان"}));
    const auto before_lines = lines_of(serialize_ontology(ont).bytes);
    const auto after_lines = lines_of(serialize_ontology(after).bytes);
    ASSERT_EQ(before_lines.size(), after_lines.size() + 1);
    // Line-wise diff: exactly the OntVal line disappears.
    std::size_t i = 0, j = 0;
    std::vector<std::string> gone;
    while (i < before_lines.size()) {
        if (j < after_lines.size() && before_lines[i] == after_lines[j]) ++j;
        else gone.push_back(before_lines[i]);
        ++i;
    }
    EXPECT_EQ(gone, std::vector<std::string>{"        <OntVal ValueName=\"يوجد إعلان\"/>"});
}

TEST(OntologyEdit, LastValueCannotBeDeleted) {
    Ontology ont = apply_ontology_edit(appointment_ontology(), oedit(OntologyEditKind::Delete, {kReg, kCtx, "الإعلان", "يوجد إعلان"}));
    EXPECT_EQ(error_of([&] { apply_ontology_edit(ont, oedit(OntologyEditKind::Delete, {kReg, kCtx, "الإعلان", "لا يوجد إعلان"})); }),
              BuilderErrc::LastValue);
}

TEST(OntologyEdit, RenameDoesNotCascadeIntoRules) {
    Ontology ont = augmented_ontology();
    OntologyEdit ren = oedit(OntologyEditKind::Rename, {"إنهاء الخدمة", "إنهاء الخدمة بالإستقالة", kR1Concept});
    ren.new_name = "الاستقالة الطوعية";
    Ontology after = apply_ontology_edit(ont, ren);
    LintReport r = check_rulebase(termination_rules(), after);
    EXPECT_EQ(r.count(lint_code::UnknownConcept), 1u);
    EXPECT_EQ(r.violations[0].token, kR1Concept);
}

TEST(RuleEdit, AddRuleAppends) {
    RuleEdit add = redit(RuleEditKind::AddRule, {kModel, "R3"});
    add.consequent = "نتيجة";
    add.findings = {Finding{"الإعلان", "Value", "يوجد إعلان"}};
    RuleBase rb = apply_rule_edit(termination_rules(), add);
    ASSERT_EQ(rb.models[0].rules.size(), 3u);
    EXPECT_EQ(rb.models[0].rules[0].name, "R1");
    EXPECT_EQ(rb.models[0].rules[1].name, "R2");
    EXPECT_EQ(rb.models[0].rules[2].name, "R3");

    RuleEdit empty = add;
    empty.path = {kModel, "R4"};
    empty.findings.clear();
    EXPECT_EQ(error_of([&] { apply_rule_edit(termination_rules(), empty); }), BuilderErrc::EmptyRule);
}

TEST(RuleEdit, DeletingOnlyFindingIsEmptyRule) {
    RuleEdit del = redit(RuleEditKind::Delete, {kModel, "R1"});
    del.finding = 1;
    EXPECT_EQ(error_of([&] { apply_rule_edit(termination_rules(), del); }), BuilderErrc::EmptyRule);
}

TEST(RuleEdit, DuplicateSlotRejected) {
    RuleEdit add = redit(RuleEditKind::AddFinding, {kModel, "R1"});
    add.findings = {Finding{"الاستقالة", "Value", "لم تقدم الإستقالة"}};
    EXPECT_EQ(error_of([&] { apply_rule_edit(termination_rules(), add); }), BuilderErrc::DuplicateSlot);
}

TEST(RuleEdit, RenameKeepsReferentialConsistency) {
    RuleEdit ren = redit(RuleEditKind::Rename, {kModel, "R1"});
    ren.new_name = "R9";
    RuleBase rb = apply_rule_edit(termination_rules(), ren);
    SessionState s = new_session(make_snapshot(appointment_ontology(), rb, 2), kModel);
    EXPECT_EQ(explain(s, "R9").consequent, kR1Consequent);
    EXPECT_THROW(explain(s, "R1"), InferenceError);

    RuleEdit clash = redit(RuleEditKind::Rename, {kModel, "R2"});
    clash.new_name = "r9";
    EXPECT_EQ(error_of([&] { apply_rule_edit(rb, clash); }), BuilderErrc::DuplicateName);
}

TEST(RuleEdit, SetConsequentAndAddModel) {
    RuleEdit set = redit(RuleEditKind::SetConsequent, {kModel, "R2"});
    set.consequent = "جديد";
    RuleBase rb = apply_rule_edit(termination_rules(), set);
    EXPECT_EQ(rb.models[0].rules[1].consequent, "جديد");
    rb = apply_rule_edit(rb, redit(RuleEditKind::AddModel, {"نموذج"}));
    EXPECT_EQ(list_models(rb), (std::vector<std::string>{kModel, "نموذج"}));
    EXPECT_EQ(error_of([&] { apply_rule_edit(rb, redit(RuleEditKind::AddModel, {kModel})); }), BuilderErrc::DuplicateName);
}

TEST(Properties, PersistenceFidelity) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        RandomKb kb = random_kb(rng);
        const auto& con = kb.ontology.regulations[0].contexts[0].concepts[0];
        Ontology ont = apply_ontology_edit(
            kb.ontology, oedit(OntologyEditKind::AddValue, {"reg", "ctx", con.name, "new" + std::to_string(trial)}));
        RuleEdit add = redit(RuleEditKind::AddRule, {"M", "Rx"});
        add.consequent = "added & <kept>";
        add.findings = {Finding{con.name, "Value", "new" + std::to_string(trial), Polarity::MustDiffer}};
        RuleBase rb = apply_rule_edit(kb.rulebase, add);
        EXPECT_EQ(*parse_ontology(serialize_ontology(ont).bytes).value, ont);
        EXPECT_EQ(*parse_rulebase(serialize_rulebase(rb).bytes).value, rb);
    }
}

TEST(LintKb, ExitCodes) {
    TempDir fixture_dir;
    install_kb(fixture_dir.path());
    LintOutcome a = lint_kb(fixture_dir.path());
    EXPECT_NE(a.exit_code, 0);
    EXPECT_EQ(a.report.count(lint_code::UnknownConcept), 2u);

    TempDir clean_dir;
    install_kb(clean_dir.path(), "augmented_ontology.xml");
    LintOutcome b = lint_kb(clean_dir.path());
    EXPECT_EQ(b.exit_code, 0);
    EXPECT_TRUE(b.report.empty());
    EXPECT_FALSE(b.rules_issues.empty());  // the </model> warning still surfaces

    std::filesystem::remove(clean_dir.path() / kRulesFile);
    LintOutcome c = lint_kb(clean_dir.path());
    EXPECT_NE(c.exit_code, 0);
    EXPECT_EQ(c.io_error, std::optional<std::string>("MissingFile"));
}

TEST(LintKb, ParseFailureIsReported) {
    TempDir dir;
    install_kb(dir.path());
    write_file_atomic(dir.path() / kRulesFile, "<KSA_Civil_Regulation>");
    LintOutcome r = lint_kb(dir.path());
    EXPECT_NE(r.exit_code, 0);
    EXPECT_FALSE(r.io_error.has_value());
    ASSERT_FALSE(r.rules_issues.empty());
    EXPECT_EQ(r.rules_issues.back().code, "WellFormedness");
}

TEST(KbDirectory, SaveLoadAndAtomicWrite) {
    TempDir dir;
    save_kb_dir(dir.path(), augmented_ontology(), termination_rules());
    KbDirectory kb = load_kb_dir(dir.path());
    ASSERT_TRUE(kb.ok());
    EXPECT_EQ(*kb.ontology.value, augmented_ontology());
    EXPECT_EQ(*kb.rules.value, termination_rules());
    EXPECT_EQ(read_file(dir.path() / kRulesFile), serialize_rulebase(termination_rules()).bytes);

    write_file_atomic(dir.path() / "x.txt", "one");
    write_file_atomic(dir.path() / "x.txt", "two");
    EXPECT_EQ(read_file(dir.path() / "x.txt"), "two");
    // No temporaries left behind.
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path()))
        if (e.path().filename().string().rfind(".rcses.lock", 0) != 0) ++files;
    EXPECT_EQ(files, 3u);
    EXPECT_THROW(read_file(dir.path() / "missing.xml"), KbIoError);
}

TEST(KbDirectory, LockIsExclusiveAcrossDescriptors) {
    TempDir dir;
    { KbDirLock lock(dir.path()); }
    KbDirLock again(dir.path());
    SUCCEED();
}
