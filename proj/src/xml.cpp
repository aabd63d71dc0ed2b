#include "xml.hpp"

#include <cctype>

#include "holdem/logstats.hpp"

namespace holdem::xml {

const std::string* Node::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Node document() {
    skip_misc();
    if (starts("<?xml")) {
      skip_past("?>");
      skip_misc();
    }
    if (!starts("<")) fail("expected the root element");
    Node root = element();
    skip_misc();
    if (pos_ < s_.size()) fail("unexpected content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw LogError(line_, col_, message); }

  bool starts(std::string_view token) const { return s_.substr(pos_, token.size()) == token; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i, ++pos_) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }

  void skip_past(std::string_view token) {
    while (pos_ < s_.size() && !starts(token)) advance();
    if (pos_ >= s_.size()) fail("unterminated construct, expected '" + std::string(token) + "'");
    advance(token.size());
  }

  // Whitespace and comments.
  void skip_misc() {
    while (true) {
      skip_space();
      if (starts("<!--")) {
        skip_past("-->");
      } else {
        return;
      }
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
  }

  std::string name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) advance();
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string attribute_value() {
    if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected a quoted attribute value");
    const char quote = s_[pos_];
    advance();
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      if (s_[pos_] == '<') fail("'<' is not allowed in attribute values");
      if (s_[pos_] == '&') {
        out += entity();
      } else {
        out += s_[pos_];
        advance();
      }
    }
    if (pos_ >= s_.size()) fail("unterminated attribute value");
    advance();
    return out;
  }

  char entity() {
    static constexpr std::pair<std::string_view, char> kEntities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
    for (auto [text, c] : kEntities) {
      if (starts(text)) {
        advance(text.size());
        return c;
      }
    }
    fail("unknown entity");
  }

  Node element() {
    Node node;
    node.line = line_;
    node.column = col_;
    advance();  // '<'
    node.name = name();
    while (true) {
      skip_space();
      if (starts("/>")) {
        advance(2);
        return node;
      }
      if (starts(">")) {
        advance();
        break;
      }
      const int line = line_, col = col_;
      std::string key = name();
      if (node.attribute(key)) throw LogError(line, col, "duplicate attribute '" + key + "'");
      skip_space();
      if (!starts("=")) fail("expected '=' after attribute name");
      advance();
      skip_space();
      node.attributes.emplace_back(std::move(key), attribute_value());
    }
    while (true) {
      skip_misc();
      if (pos_ >= s_.size()) fail("unexpected end of document inside <" + node.name + ">");
      if (starts("</")) {
        advance(2);
        const int line = line_, col = col_;
        const std::string closing = name();
        if (closing != node.name) {
          throw LogError(line, col, "mismatched closing tag </" + closing + ">, expected </" + node.name + ">");
        }
        skip_space();
        if (!starts(">")) fail("expected '>'");
        advance();
        return node;
      }
      if (starts("<")) {
        node.children.push_back(element());
        continue;
      }
      fail("unexpected text content");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

Node parse(std::string_view text) { return Parser(text).document(); }

}  // namespace holdem::xml
