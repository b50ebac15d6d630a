#pragma once

#include <string>
#include <string_view>

namespace rcses {

/// Orthographic normalization switches. Unicode canonical composition (NFC)
/// is always applied; every flag below is an additional, optional step.
struct NormalizationPolicy {
    bool collapse_whitespace = true;
    bool strip_diacritics = true;  // Arabic harakat and Quranic marks
    bool strip_tatweel = true;     // U+0640
    bool unify_alef = true;        // U+0622/U+0623/U+0625 -> U+0627
    bool unify_ya = false;         // U+0649 -> U+064A
    bool case_fold = true;         // Latin script only

    /// Policy used for stored display text: NFC plus whitespace cleanup only.
    static constexpr NormalizationPolicy display() {
        return {true, false, false, false, false, false};
    }

    friend bool operator==(const NormalizationPolicy&, const NormalizationPolicy&) = default;
};

/// Normalizes UTF-8 text. Steps run in a fixed order: NFC, Latin case fold,
/// tatweel strip, diacritic strip, alef/ya unification, whitespace trim and
/// collapse. The pipeline is iterated to a fixed point, so the result is
/// idempotent under any policy. Malformed UTF-8 sequences become U+FFFD.
std::string normalize_text(std::string_view raw, const NormalizationPolicy& policy);

/// normalize_text with NormalizationPolicy::display().
std::string display_text(std::string_view raw);

/// Decodes UTF-8 into code points (malformed sequences become U+FFFD).
std::u32string to_code_points(std::string_view utf8);
std::string to_utf8(std::u32string_view code_points);

/// True when the bytes form valid UTF-8 (no overlongs, surrogates, or values past U+10FFFF).
bool is_valid_utf8(std::string_view bytes);

}  // namespace rcses
