#include "epinarr/xml.hpp"

#include <cctype>

#include "epinarr/errors.hpp"

namespace epinarr {

const std::string* XmlNode::attribute(const std::string& key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

const XmlNode* XmlNode::child(const std::string& childName) const {
  for (const auto& c : children)
    if (c.name == childName) return &c;
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::children_named(
    const std::string& childName) const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children)
    if (c.name == childName) out.push_back(&c);
  return out;
}

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '-' || c == '.';
}

class XmlReader {
 public:
  explicit XmlReader(const std::string& text) : src_(text) {
    if (src_.size() >= 3 && src_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
  }

  XmlNode run() {
    skip_prolog();
    XmlNode root = read_element();
    skip_misc();
    if (pos_ < src_.size()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw XmlError(line_, col_, msg);
  }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  bool starts_with(const char* s) const {
    return src_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
  }

  char advance() {
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')
      advance();
  }

  void expect(char c) {
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  void skip_comment() {
    // positioned on "<!--"
    for (int i = 0; i < 4; ++i) advance();
    while (!starts_with("-->")) {
      if (pos_ >= src_.size()) fail("unterminated comment");
      advance();
    }
    for (int i = 0; i < 3; ++i) advance();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_comment();
      } else {
        return;
      }
    }
  }

  void skip_prolog() {
    skip_ws();
    if (starts_with("<?xml")) {
      while (!starts_with("?>")) {
        if (pos_ >= src_.size()) fail("unterminated XML declaration");
        advance();
      }
      advance();
      advance();
    }
    skip_misc();
  }

  std::string read_name() {
    if (!name_start(peek())) fail("expected a name");
    std::string name;
    while (name_char(peek())) name.push_back(advance());
    return name;
  }

  std::string decode_entity() {
    // positioned on '&'
    int eline = line_, ecol = col_;
    advance();
    std::string ent;
    while (peek() != ';' && peek() != '\0' && ent.size() < 12)
      ent.push_back(advance());
    if (peek() != ';') throw XmlError(eline, ecol, "unterminated entity");
    advance();
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "amp") return "&";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (!ent.empty() && ent[0] == '#') {
      long code = 0;
      try {
        code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                   ? std::stol(ent.substr(2), nullptr, 16)
                   : std::stol(ent.substr(1));
      } catch (...) {
        throw XmlError(eline, ecol, "bad character reference &" + ent + ";");
      }
      if (code <= 0 || code > 0x10FFFF)
        throw XmlError(eline, ecol, "character reference out of range");
      // UTF-8 encode
      std::string out;
      unsigned cp = static_cast<unsigned>(code);
      if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
      } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
      return out;
    }
    throw XmlError(eline, ecol, "unknown entity &" + ent + ";");
  }

  std::string read_attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("expected a quoted value");
    advance();
    std::string value;
    while (peek() != quote) {
      if (peek() == '\0') fail("unterminated attribute value");
      if (peek() == '<') fail("'<' inside attribute value");
      if (peek() == '&') {
        value += decode_entity();
      } else {
        value.push_back(advance());
      }
    }
    advance();
    return value;
  }

  XmlNode read_element() {
    XmlNode node;
    node.line = line_;
    node.column = col_;
    expect('<');
    node.name = read_name();

    for (;;) {
      skip_ws();
      if (peek() == '/') {
        advance();
        expect('>');
        return node;  // self-closing
      }
      if (peek() == '>') {
        advance();
        break;
      }
      std::string key = read_name();
      skip_ws();
      expect('=');
      skip_ws();
      std::string value = read_attribute_value();
      for (const auto& [k, v] : node.attributes)
        if (k == key) fail("duplicate attribute \"" + key + "\"");
      node.attributes.emplace_back(std::move(key), std::move(value));
    }

    // content
    for (;;) {
      if (pos_ >= src_.size()) fail("unterminated element <" + node.name + ">");
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("</")) {
        advance();
        advance();
        std::string closing = read_name();
        if (closing != node.name)
          fail("mismatched closing tag </" + closing + "> for <" + node.name +
               ">");
        skip_ws();
        expect('>');
        return node;
      } else if (peek() == '<') {
        if (peek(1) == '!' || peek(1) == '?')
          fail("unsupported markup inside <" + node.name + ">");
        node.children.push_back(read_element());
      } else if (peek() == '&') {
        node.text += decode_entity();
      } else {
        node.text.push_back(advance());
      }
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

XmlNode parse_xml(const std::string& text) { return XmlReader(text).run(); }

std::string xml_escape(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace epinarr
