#include "rcses/json_io.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <sys/wait.h>

using namespace rcses;
using namespace rcses::testing;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

RunResult run(const std::string& args) {
    const std::string cmd = quote(RCSES_KB_BIN) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST(Cli, LintFixtureKb) {
    TempDir dir;
    install_kb(dir.path());
    RunResult r = run("lint " + quote(dir.path()));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.out.find("UnknownConcept"), std::string::npos);
    EXPECT_NE(r.out.find(kR1Concept), std::string::npos);

    RunResult j = run("lint --json " + quote(dir.path()));
    EXPECT_EQ(j.exit_code, 1);
    Json parsed = Json::parse(j.out.substr(j.out.find('{')));
    EXPECT_EQ(parsed["report"]["counts"]["UnknownConcept"], 2);
}

TEST(Cli, LintCleanAndMissing) {
    TempDir dir;
    install_kb(dir.path(), "augmented_ontology.xml");
    EXPECT_EQ(run("lint " + quote(dir.path())).exit_code, 0);
    std::filesystem::remove(dir.path() / kRulesFile);
    RunResult r = run("lint " + quote(dir.path()));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.out.find("MissingFile"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").exit_code, 2);
    EXPECT_EQ(run("frobnicate").exit_code, 2);
    EXPECT_EQ(run("edit /tmp").exit_code, 2);
}

TEST(Cli, FmtRewritesCanonically) {
    TempDir dir;
    install_kb(dir.path());
    EXPECT_EQ(run("fmt " + quote(dir.path())).exit_code, 0);
    EXPECT_EQ(read_file(dir.path() / kRulesFile), serialize_rulebase(termination_rules()).bytes);
    EXPECT_EQ(read_file(dir.path() / kOntologyFile), serialize_ontology(appointment_ontology()).bytes);
}

TEST(Cli, ShowModel) {
    TempDir dir;
    install_kb(dir.path());
    RunResult r = run("show " + quote(dir.path()) + " --model " + quote(kModel));
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find(kR1Consequent), std::string::npos);
    EXPECT_EQ(run("show " + quote(dir.path()) + " --model nope").exit_code, 2);
}

TEST(Cli, EditAppliesAllOrNothing) {
    TempDir dir;
    install_kb(dir.path(), "augmented_ontology.xml");
    const std::string rules_before = read_file(dir.path() / kRulesFile);
    const std::string ont_before = read_file(dir.path() / kOntologyFile);

    Json bad = Json::array({
        {{"target", "rules"}, {"kind", "rename"}, {"path", {kModel, "R1"}}, {"name", "R9"}},
        {{"target", "rules"}, {"kind", "delete"}, {"path", {kModel, "R2"}}, {"finding", 1}},
    });
    write_file_atomic(dir.path() / "bad.json", bad.dump());
    RunResult rejected = run("edit " + quote(dir.path()) + " --edit-file " + quote(dir.path() / "bad.json"));
    EXPECT_EQ(rejected.exit_code, 1);
    EXPECT_NE(rejected.out.find("edit #2 rejected: EmptyRule"), std::string::npos);
    EXPECT_EQ(read_file(dir.path() / kRulesFile), rules_before);
    EXPECT_EQ(read_file(dir.path() / kOntologyFile), ont_before);

    Json good = Json::array({
        {{"target", "rules"}, {"kind", "rename"}, {"path", {kModel, "R1"}}, {"name", "R9"}},
        {{"target", "rules"},
         {"kind", "add-rule"},
         {"path", {kModel, "R3"}},
         {"consequent", "نتيجة"},
         {"findings", {{{"concept", kR1Concept}, {"value", "لم تقدم الإستقالة"}, {"equal", "No"}}}}},
    });
    write_file_atomic(dir.path() / "good.json", good.dump());
    RunResult applied = run("edit " + quote(dir.path()) + " --edit-file " + quote(dir.path() / "good.json"));
    EXPECT_EQ(applied.exit_code, 0) << applied.out;
    auto rb = parse_rulebase(read_file(dir.path() / kRulesFile));
    ASSERT_TRUE(rb.ok());
    ASSERT_EQ(rb.value->models[0].rules.size(), 3u);
    EXPECT_EQ(rb.value->models[0].rules[0].name, "R9");
    EXPECT_EQ(rb.value->models[0].rules[2].findings[0].polarity, Polarity::MustDiffer);
    EXPECT_EQ(read_file(dir.path() / kOntologyFile), ont_before);  // untouched document not rewritten

    write_file_atomic(dir.path() / "junk.json", "{not json");
    EXPECT_EQ(run("edit " + quote(dir.path()) + " --edit-file " + quote(dir.path() / "junk.json")).exit_code, 2);
}
