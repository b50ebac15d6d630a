#include "xml_reader.hpp"

#include "rcses/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace rcses::detail {

const std::string* XmlElement::attribute(std::string_view attr) const {
    for (const auto& a : attributes) {
        if (a.name == attr) return &a.value;
    }
    return nullptr;
}

namespace {

struct SyntaxError {
    std::string path;
    std::string message;
};

bool ascii_iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return is_name_start(c) || std::isdigit(u) || c == '-' || c == '.';
}

class Reader {
public:
    Reader(std::string_view text, IssueList& issues) : s_(text), issues_(issues) {}

    XmlElement document() {
        if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        prolog();
        if (eof() || peek() != '<') fail("/", "expected a root element");
        XmlElement root = element("", 0);
        misc("/");
        if (!eof()) fail("/", "content after the root element");
        return root;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    IssueList& issues_;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    bool starts_with(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i, ++pos_) {
            if (s_[pos_] == '\n') ++line_;
        }
    }

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        throw SyntaxError{path.empty() ? "/" : path, "line " + std::to_string(line_) + ": " + msg};
    }

    void skip_space() {
        while (!eof() && is_space(peek())) advance();
    }

    std::string name(const std::string& path) {
        if (eof() || !is_name_start(peek())) fail(path, "expected a name");
        std::size_t start = pos_;
        while (!eof() && is_name_char(peek())) advance();
        return std::string(s_.substr(start, pos_ - start));
    }

    void skip_until(std::string_view terminator, const std::string& path, const char* what) {
        std::size_t end = s_.find(terminator, pos_);
        if (end == std::string_view::npos) fail(path, std::string("unterminated ") + what);
        advance(end + terminator.size() - pos_);
    }

    void comment(const std::string& path) {
        advance(4);
        std::size_t end = s_.find("--", pos_);
        if (end == std::string_view::npos) fail(path, "unterminated comment");
        if (s_.substr(end, 3) != "-->") fail(path, "'--' inside comment");
        advance(end + 3 - pos_);
    }

    void declaration() {
        // <?xml version="1.0" encoding="..."?>
        std::size_t end = s_.find("?>", pos_);
        if (end == std::string_view::npos) fail("/", "unterminated XML declaration");
        std::string_view decl = s_.substr(pos_, end - pos_);
        std::size_t enc = decl.find("encoding");
        if (enc != std::string_view::npos) {
            std::size_t q = decl.find_first_of("\"'", enc);
            if (q != std::string_view::npos) {
                std::size_t q2 = decl.find(decl[q], q + 1);
                std::string_view value = decl.substr(q + 1, q2 == std::string_view::npos ? 0 : q2 - q - 1);
                if (!ascii_iequals(value, "utf-8") && !ascii_iequals(value, "utf8")) {
                    fail("/", "unsupported encoding '" + std::string(value) + "' (UTF-8 only)");
                }
            }
        }
        advance(end + 2 - pos_);
    }

    void misc(const std::string& path) {
        for (;;) {
            skip_space();
            if (starts_with("<!--")) comment(path);
            else if (starts_with("<?")) skip_until("?>", path, "processing instruction");
            else return;
        }
    }

    void prolog() {
        if (starts_with("<?xml") && s_.size() > pos_ + 5 && is_space(s_[pos_ + 5])) declaration();
        for (;;) {
            misc("/");
            if (starts_with("<!DOCTYPE")) fail("/", "DOCTYPE declarations are not supported");
            return;
        }
    }

    // Decodes an entity or character reference starting at '&'.
    void reference(std::string& out, const std::string& path) {
        std::size_t semi = s_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) fail(path, "malformed reference");
        std::string_view ref = s_.substr(pos_ + 1, semi - pos_ - 1);
        static const std::map<std::string_view, char> named = {
            {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''}};
        if (auto it = named.find(ref); it != named.end()) {
            out.push_back(it->second);
        } else if (ref.size() > 1 && ref[0] == '#') {
            unsigned long cp = 0;
            bool hex = ref[1] == 'x';
            std::string_view digits = ref.substr(hex ? 2 : 1);
            if (digits.empty()) fail(path, "empty character reference");
            for (char d : digits) {
                int v;
                if (std::isdigit(static_cast<unsigned char>(d))) v = d - '0';
                else if (hex && std::isxdigit(static_cast<unsigned char>(d))) v = std::tolower(d) - 'a' + 10;
                else fail(path, "bad character reference");
                cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
                if (cp > 0x10FFFF) fail(path, "character reference out of range");
            }
            if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) fail(path, "invalid character reference");
            out += to_utf8(std::u32string(1, static_cast<char32_t>(cp)));
        } else {
            fail(path, "unknown entity '&" + std::string(ref) + ";'");
        }
        advance(semi + 1 - pos_);
    }

    std::string attribute_value(const std::string& path) {
        if (eof() || (peek() != '"' && peek() != '\'')) fail(path, "attribute value must be quoted");
        char quote = peek();
        advance();
        std::string value;
        for (;;) {
            if (eof()) fail(path, "unterminated attribute value");
            char c = peek();
            if (c == quote) { advance(); break; }
            if (c == '<') fail(path, "'<' in attribute value");
            if (c == '&') { reference(value, path); continue; }
            value.push_back(is_space(c) ? ' ' : c);
            advance();
        }
        return value;
    }

    XmlElement element(const std::string& parent_path, std::size_t index) {
        advance();  // '<'
        XmlElement el;
        el.line = line_;
        el.name = name(parent_path);
        el.path = parent_path + "/" + el.name + (index > 0 ? "[" + std::to_string(index) + "]" : "");

        for (;;) {
            bool had_space = !eof() && is_space(peek());
            skip_space();
            if (eof()) fail(el.path, "unterminated start tag");
            if (starts_with("/>")) { advance(2); return el; }
            if (peek() == '>') { advance(); break; }
            if (!had_space) fail(el.path, "expected whitespace between attributes");
            std::string attr = name(el.path);
            skip_space();
            if (eof() || peek() != '=') fail(el.path, "expected '=' after attribute " + attr);
            advance();
            skip_space();
            std::string value = attribute_value(el.path);
            if (el.attribute(attr) != nullptr) fail(el.path, "duplicate attribute " + attr);
            el.attributes.push_back({std::move(attr), std::move(value)});
        }

        std::map<std::string, std::size_t> counts;
        for (;;) {
            if (eof()) fail(el.path, "missing closing tag for " + el.name);
            if (starts_with("</")) {
                advance(2);
                std::string closing = name(el.path);
                skip_space();
                if (eof() || peek() != '>') fail(el.path, "malformed closing tag");
                advance();
                if (closing != el.name) {
                    if (!ascii_iequals(closing, el.name)) {
                        fail(el.path, "closing tag </" + closing + "> does not match <" + el.name + ">");
                    }
                    issues_.push_back({Severity::Warning, el.path, issue_code::ClosingTagCase,
                                       "closing tag </" + closing + "> differs in case from <" + el.name + ">"});
                }
                return el;
            }
            if (starts_with("<!--")) { comment(el.path); continue; }
            if (starts_with("<![CDATA[")) {
                advance(9);
                std::size_t end = s_.find("]]>", pos_);
                if (end == std::string_view::npos) fail(el.path, "unterminated CDATA section");
                std::string_view body = s_.substr(pos_, end - pos_);
                if (std::any_of(body.begin(), body.end(), [](char c) { return !is_space(c); })) el.has_text = true;
                advance(end + 3 - pos_);
                continue;
            }
            if (starts_with("<?")) { skip_until("?>", el.path, "processing instruction"); continue; }
            if (starts_with("<!")) fail(el.path, "unexpected markup declaration");
            if (peek() == '<') {
                // Peek the child name to compute its sibling index.
                std::size_t save_pos = pos_, save_line = line_;
                advance();
                std::string child = name(el.path);
                pos_ = save_pos;
                line_ = save_line;
                el.children.push_back(element(el.path, ++counts[child]));
                continue;
            }
            if (peek() == '&') {
                std::string scratch;
                reference(scratch, el.path);
                el.has_text = true;
                continue;
            }
            if (!is_space(peek())) el.has_text = true;
            advance();
        }
        return el;
    }
};

}  // namespace

XmlDocument read_xml(std::string_view bytes) {
    XmlDocument doc;
    if (!is_valid_utf8(bytes)) {
        doc.issues.push_back({Severity::Error, "/", issue_code::WellFormedness, "input is not valid UTF-8"});
        return doc;
    }
    try {
        Reader reader(bytes, doc.issues);
        doc.root = reader.document();
    } catch (const SyntaxError& e) {
        doc.root.reset();
        doc.issues.push_back({Severity::Error, e.path, issue_code::WellFormedness, e.message});
    }
    return doc;
}

}  // namespace rcses::detail
