#include "rcses/knowledge_model.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

using namespace rcses;
using namespace rcses::testing;

TEST(ListModels, TerminationFixtureHasOneModel) {
    EXPECT_EQ(list_models(termination_rules()), std::vector<std::string>{"إنهاء الخدمة"});
}

TEST(ListModels, EmptyAndOrder) {
    EXPECT_TRUE(list_models(RuleBase{}).empty());
    RuleBase rb{{Model{"A", {}}, Model{"B", {}}}};
    EXPECT_EQ(list_models(rb), (std::vector<std::string>{"A", "B"}));
}

TEST(LookupConcept, FindsAppointmentConcept) {
    const Ontology ont = appointment_ontology();
    auto hits = lookup_concept(ont, "الإعلان");
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].regulation->name, "التعيين في الوظائف العامة");
    EXPECT_EQ(hits[0].context->name, "التوظيف في وظائف المرتبة السادسة حتي العاشرة - مؤقت");
    EXPECT_EQ(hits[0].concept_ptr->name, "الإعلان");
}

TEST(LookupConcept, AbsentOrEmpty) {
    EXPECT_TRUE(lookup_concept(appointment_ontology(), "الإستقالة").empty());
    EXPECT_TRUE(lookup_concept(Ontology{}, "anything").empty());
}

TEST(LookupConcept, ReturnsEveryOccurrenceInDocumentOrder) {
    Ontology ont{{Regulation{"r1", {Context{"a", {Concept{"x", "Value", {"1"}}}}, Context{"b", {Concept{"x", "Value", {"2"}}}}}}}};
    auto hits = lookup_concept(ont, "X");  // case-folded match
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0].context->name, "a");
    EXPECT_EQ(hits[1].context->name, "b");
}

TEST(ValueDomain, AppointmentConcepts) {
    const Ontology ont = appointment_ontology();
    EXPECT_EQ(value_domain(*lookup_concept(ont, "الإعلان").at(0).concept_ptr),
              (std::vector<std::string>{"يوجد إعلان", "لا يوجد إعلان"}));
    EXPECT_EQ(value_domain(*lookup_concept(ont, "قرار من مجلس الوزراء").at(0).concept_ptr),
              (std::vector<std::string>{"يوجد قرار", "لا يوجد قرار"}));
    EXPECT_EQ(value_domain(Concept{"c", "Value", {"only"}}).size(), 1u);
}

TEST(RuleArity, CountsFindings) {
    const RuleBase rb = termination_rules();
    EXPECT_EQ(rule_arity(rb.models[0].rules[0]), 1u);
    EXPECT_EQ(rule_arity(rb.models[0].rules[1]), 1u);
    Rule r{"R", "c", {Finding{"a", "Value", "1"}, Finding{"b", "Value", "1"}, Finding{"c", "Value", "1"}}};
    EXPECT_EQ(rule_arity(r), 3u);
}

TEST(ValidateOntology, ReportsDuplicatesAndEmptyDomains) {
    Ontology ont{{Regulation{"r", {Context{"c", {Concept{"k", "Value", {}}, Concept{"K", "Value", {"v", "v "}}}}}},
                  Regulation{"R", {}}}};
    IssueList issues = validate_ontology(ont);
    auto has = [&](const std::string& code, const std::string& path) {
        for (const auto& i : issues) if (i.code == code && i.path == path) return true;
        return false;
    };
    EXPECT_TRUE(has("EmptyDomain", "/KSA_Civil_Ontology/OntParent[1]/OntChild[1]/OntConcept[1]"));
    EXPECT_TRUE(has("DuplicateName", "/KSA_Civil_Ontology/OntParent[1]/OntChild[1]/OntConcept[2]"));
    EXPECT_TRUE(has("DuplicateName", "/KSA_Civil_Ontology/OntParent[1]/OntChild[1]/OntConcept[2]/OntVal[2]"));
    EXPECT_TRUE(has("DuplicateName", "/KSA_Civil_Ontology/OntParent[2]"));
    EXPECT_TRUE(validate_ontology(appointment_ontology()).empty());
}

TEST(ValidateRulebase, ReportsEmptyRulesAndDuplicateSlots) {
    RuleBase rb{{Model{"m", {Rule{"R1", "c", {}},
                             Rule{"R2", "c", {Finding{"x", "Value", "1"}, Finding{"X", "value", "2"}}},
                             Rule{"r1", "c", {Finding{"x", "Value", "1"}}}}}}};
    IssueList issues = validate_rulebase(rb);
    ASSERT_EQ(issues.size(), 3u);
    EXPECT_EQ(issues[0].code, "EmptyRule");
    EXPECT_EQ(issues[0].path, "/KSA_Civil_Regulation/Model[1]/Rule[1]");
    EXPECT_EQ(issues[1].code, "DuplicateSlot");
    EXPECT_EQ(issues[1].path, "/KSA_Civil_Regulation/Model[1]/Rule[2]/Finding[2]");
    EXPECT_EQ(issues[2].code, "DuplicateName");
    EXPECT_TRUE(validate_rulebase(termination_rules()).empty());
}

TEST(SameName, NormalizationSensitiveIdentity) {
    EXPECT_TRUE(same_name("الإعلان", "الاعلان", {}));
    NormalizationPolicy strict = NormalizationPolicy::display();
    EXPECT_FALSE(same_name("الإعلان", "الاعلان", strict));
}
