#pragma once

// Minimal non-validating XML reader for the knowledge documents. It builds a
// small element tree with canonical element paths and reports syntax problems
// as ParseIssues instead of throwing.

#include "rcses/issue.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rcses::detail {

struct XmlAttribute {
    std::string name;
    std::string value;
};

struct XmlElement {
    std::string name;
    std::string path;  // e.g. /KSA_Civil_Regulation/Model[1]
    std::size_t line = 0;
    std::vector<XmlAttribute> attributes;
    std::vector<XmlElement> children;
    bool has_text = false;  // non-whitespace character data present

    const std::string* attribute(std::string_view attr) const;
};

struct XmlDocument {
    std::optional<XmlElement> root;
    IssueList issues;
};

/// Accepts UTF-8 only (optional BOM). A closing tag whose name matches the
/// open tag case-insensitively is tolerated with a ClosingTagCase warning.
XmlDocument read_xml(std::string_view bytes);

}  // namespace rcses::detail
