#include "rcses/normalize.hpp"

#include <gtest/gtest.h>

#include <random>

using rcses::NormalizationPolicy;
using rcses::normalize_text;

namespace {

NormalizationPolicy alef_off() {
    NormalizationPolicy p;
    p.unify_alef = false;
    return p;
}

}  // namespace

TEST(NormalizeText, TrimsAndCollapsesWhitespace) {
    EXPECT_EQ(normalize_text("  يوجد إعلان ", alef_off()), "يوجد إعلان");
    EXPECT_EQ(normalize_text("a \t\n b", {}), "a b");
    EXPECT_EQ(normalize_text(" x ", {}), "x");
}

TEST(NormalizeText, UnifiesAlefForms) {
    // Expected bytes from an independent Python pass: NFC, then U+0622/0623/0625 -> U+0627.
    const std::string expected = "\xd8\xa7\xd9\x84\xd8\xa7\xd8\xb3\xd8\xaa\xd9\x82\xd8\xa7\xd9\x84\xd8\xa9";
    EXPECT_EQ(normalize_text("الإستقالة", {}), expected);
    EXPECT_EQ(normalize_text("الإستقالة", {}), "الاستقالة");
    EXPECT_EQ(normalize_text("الإستقالة", alef_off()), "الإستقالة");
    EXPECT_EQ(normalize_text("آأإا", {}), "اااا");
}

TEST(NormalizeText, ComposesDecomposedHamza) {
    // alef + combining hamza below composes to U+0625 under NFC.
    NormalizationPolicy p = alef_off();
    p.strip_diacritics = false;
    EXPECT_EQ(normalize_text("\u0627\u0655", p), "\u0625");
    EXPECT_EQ(normalize_text("\u0627\u0655", {}), "\u0627");
    // Tatweel between alef and hamza: stripping it exposes a new composition pair.
    EXPECT_EQ(normalize_text("\u0627\u0640\u0654", p), "\u0623");
    NormalizationPolicy keep_tatweel = p;
    keep_tatweel.strip_tatweel = false;
    EXPECT_EQ(normalize_text("\u0627\u0640\u0654", keep_tatweel), "\u0627\u0640\u0654");
}

TEST(NormalizeText, StripsDiacriticsAndTatweel) {
    EXPECT_EQ(normalize_text("مُوَظَّف", {}), "موظف");
    EXPECT_EQ(normalize_text("مـــوظف", {}), "موظف");
    NormalizationPolicy keep;
    keep.strip_tatweel = false;
    keep.strip_diacritics = false;
    EXPECT_EQ(normalize_text("مـُوظف", keep), "مـُوظف");
}

TEST(NormalizeText, YaUnificationIsOptIn) {
    EXPECT_EQ(normalize_text("على", {}), "على");
    NormalizationPolicy p;
    p.unify_ya = true;
    EXPECT_EQ(normalize_text("على", p), "علي");
}

TEST(NormalizeText, CaseFoldTouchesLatinOnly) {
    EXPECT_EQ(normalize_text("Value", {}), "value");
    EXPECT_EQ(normalize_text("ÀB", {}), "àb");
    EXPECT_EQ(normalize_text("ΣΑ", {}), "ΣΑ");
    NormalizationPolicy p;
    p.case_fold = false;
    EXPECT_EQ(normalize_text("Value", p), "Value");
}

TEST(NormalizeText, DisplayPolicyKeepsOrthography) {
    EXPECT_EQ(rcses::display_text("  الإعلان  "), "الإعلان");
    EXPECT_EQ(rcses::display_text("Value"), "Value");
}

TEST(NormalizeText, MalformedUtf8BecomesReplacementCharacter) {
    EXPECT_EQ(normalize_text("a\xff" "b", {}), "a�" "b");
    EXPECT_FALSE(rcses::is_valid_utf8("\xc0\x80"));
    EXPECT_FALSE(rcses::is_valid_utf8("\xed\xa0\x80"));
    EXPECT_TRUE(rcses::is_valid_utf8("الإعلان"));
}

TEST(NormalizeText, IdempotentForRandomTextUnderRandomPolicies) {
    // Alphabet biased toward the interesting code points: Arabic letters and
    // marks, tatweel, alef/ya variants, Latin with case, and assorted spaces.
    const std::u32string alphabet = U"اآأإٱىيلمـ"
                                    U"ًَِّْٰٕٓٔۖ"
                                    U"aAzZÀà́̈ \t\n  "
                                    U"ΑσẞßK";
    std::mt19937 rng(20240517);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 14);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < 4000; ++i) {
        std::u32string s;
        for (int n = len(rng); n > 0; --n) s.push_back(alphabet[pick(rng)]);
        NormalizationPolicy p{coin(rng), coin(rng), coin(rng), coin(rng), coin(rng), coin(rng)};
        const std::string once = normalize_text(rcses::to_utf8(s), p);
        ASSERT_EQ(normalize_text(once, p), once) << "input #" << i;
    }
}
