#pragma once

#include <string>
#include <vector>

namespace rcses {

enum class Severity { Error, Warning };

std::string to_string(Severity s);

/// A problem located inside a knowledge document. `path` is an element path
/// such as "/KSA_Civil_Regulation/Model[1]/Rule[2]" (1-based, counted among
/// same-named siblings).
struct ParseIssue {
    Severity severity = Severity::Error;
    std::string path;
    std::string code;
    std::string message;

    friend bool operator==(const ParseIssue&, const ParseIssue&) = default;
};

using IssueList = std::vector<ParseIssue>;

bool has_errors(const IssueList& issues);

namespace issue_code {
inline constexpr const char* WellFormedness = "WellFormedness";
inline constexpr const char* UnknownElement = "UnknownElement";
inline constexpr const char* UnknownAttribute = "UnknownAttribute";
inline constexpr const char* AttributeMissing = "AttributeMissing";
inline constexpr const char* UnexpectedText = "UnexpectedText";
inline constexpr const char* ClosingTagCase = "ClosingTagCase";
inline constexpr const char* BadCounter = "BadCounter";
inline constexpr const char* DuplicateName = "DuplicateName";
inline constexpr const char* EmptyName = "EmptyName";
inline constexpr const char* EmptyDomain = "EmptyDomain";
inline constexpr const char* EmptyRule = "EmptyRule";
inline constexpr const char* DuplicateSlot = "DuplicateSlot";
inline constexpr const char* BadPolarity = "BadPolarity";
}  // namespace issue_code

}  // namespace rcses
