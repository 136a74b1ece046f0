#ifndef EPINARR_XML_HPP
#define EPINARR_XML_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace epinarr {

/// A strict, small XML reader covering what SBML Level 2 documents need:
/// one root element, attributes, character data, comments, the XML
/// declaration, and the five predefined entities plus numeric character
/// references. No DTDs, no CDATA, no processing instructions beyond the
/// declaration. Throws XmlError with 1-based line/column on the first
/// violation.
struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  std::string text;  // concatenated character data, entity-decoded
  int line = 1;
  int column = 1;

  const std::string* attribute(const std::string& key) const;
  const XmlNode* child(const std::string& childName) const;
  std::vector<const XmlNode*> children_named(const std::string& childName) const;
};

XmlNode parse_xml(const std::string& text);

/// Escapes &, <, >, " for use in attribute values and character data.
std::string xml_escape(const std::string& raw);

}  // namespace epinarr

#endif
