#include "rcses/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace rcses {
namespace {

bool is_arabic_diacritic(char32_t c) {
    return (c >= 0x0610 && c <= 0x061A) || (c >= 0x064B && c <= 0x065F) || c == 0x0670 ||
           (c >= 0x06D6 && c <= 0x06DC) || (c >= 0x06DF && c <= 0x06E4) || c == 0x06E7 ||
           c == 0x06E8 || (c >= 0x06EA && c <= 0x06ED);
}

const icu::Normalizer2& nfc() {
    static const icu::Normalizer2* instance = [] {
        UErrorCode status = U_ZERO_ERROR;
        const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
        if (U_FAILURE(status) || n == nullptr) {
            throw std::runtime_error("ICU NFC normalizer unavailable");
        }
        return n;
    }();
    return *instance;
}

std::u32string compose(const std::u32string& text) {
    icu::UnicodeString u = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(text.data()),
                                                         static_cast<int32_t>(text.size()));
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString composed = nfc().normalize(u, status);
    if (U_FAILURE(status)) {
        return text;
    }
    std::u32string out;
    out.reserve(static_cast<std::size_t>(composed.length()));
    for (int32_t i = 0; i < composed.length();) {
        UChar32 c = composed.char32At(i);
        out.push_back(static_cast<char32_t>(c));
        i += U16_LENGTH(c);
    }
    return out;
}

std::u32string one_pass(const std::u32string& input, const NormalizationPolicy& policy) {
    std::u32string text = compose(input);

    std::u32string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (policy.case_fold) {
            UErrorCode status = U_ZERO_ERROR;
            if (uscript_getScript(static_cast<UChar32>(c), &status) == USCRIPT_LATIN && U_SUCCESS(status)) {
                c = static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
            }
        }
        if (policy.strip_tatweel && c == 0x0640) continue;
        if (policy.strip_diacritics && is_arabic_diacritic(c)) continue;
        if (policy.unify_alef && (c == 0x0622 || c == 0x0623 || c == 0x0625)) c = 0x0627;
        if (policy.unify_ya && c == 0x0649) c = 0x064A;
        out.push_back(c);
    }

    if (!policy.collapse_whitespace) return out;

    std::u32string collapsed;
    collapsed.reserve(out.size());
    bool pending_space = false;
    for (char32_t c : out) {
        if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
            pending_space = !collapsed.empty();
            continue;
        }
        if (pending_space) collapsed.push_back(U' ');
        pending_space = false;
        collapsed.push_back(c);
    }
    return collapsed;
}

}  // namespace

std::u32string to_code_points(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        auto b0 = static_cast<unsigned char>(s[i]);
        int len = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if (b0 < 0x80) { cp = b0; len = 1; }
        else if ((b0 & 0xE0) == 0xC0) { cp = b0 & 0x1F; len = 2; min = 0x80; }
        else if ((b0 & 0xF0) == 0xE0) { cp = b0 & 0x0F; len = 3; min = 0x800; }
        else if ((b0 & 0xF8) == 0xF0) { cp = b0 & 0x07; len = 4; min = 0x10000; }
        else { out.push_back(0xFFFD); ++i; continue; }

        if (i + static_cast<std::size_t>(len) > s.size()) { out.push_back(0xFFFD); ++i; continue; }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
            if ((b & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || (len > 1 && cp < min) || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(len);
    }
    return out;
}

std::string to_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (char32_t c : cps) {
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
        } else if (c < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else if (c < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (c >> 12)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (c >> 18)));
            out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) { ++i; continue; }
        int len = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if ((b0 & 0xE0) == 0xC0) { cp = b0 & 0x1F; len = 2; min = 0x80; }
        else if ((b0 & 0xF0) == 0xE0) { cp = b0 & 0x0F; len = 3; min = 0x800; }
        else if ((b0 & 0xF8) == 0xF0) { cp = b0 & 0x07; len = 4; min = 0x10000; }
        else return false;
        if (i + static_cast<std::size_t>(len) > s.size()) return false;
        for (int k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
            if ((b & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += static_cast<std::size_t>(len);
    }
    return true;
}

namespace {

// Printable ASCII with no whitespace other than single interior spaces needs no
// Unicode machinery: NFC is the identity and only the case fold applies.
bool ascii_fast_path(std::string_view raw, const NormalizationPolicy& policy, std::string& out) {
    if (raw.empty()) return true;
    for (char c : raw) {
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7F) return false;
    }
    if (policy.collapse_whitespace &&
        (raw.front() == ' ' || raw.back() == ' ' || raw.find("  ") != std::string_view::npos)) {
        return false;
    }
    out.assign(raw);
    if (policy.case_fold) {
        for (char& c : out) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return true;
}

}  // namespace

std::string normalize_text(std::string_view raw, const NormalizationPolicy& policy) {
    if (std::string fast; ascii_fast_path(raw, policy, fast)) return fast;
    std::u32string text = to_code_points(raw);
    // Stripping can expose new composition pairs (e.g. alef, tatweel, hamza above),
    // so repeat until nothing changes. In practice this settles in one or two passes.
    for (int pass = 0; pass < 8; ++pass) {
        std::u32string next = one_pass(text, policy);
        if (next == text) break;
        text = std::move(next);
    }
    return to_utf8(text);
}

std::string display_text(std::string_view raw) {
    return normalize_text(raw, NormalizationPolicy::display());
}

}  // namespace rcses
