#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "layerdoc/annotation.hpp"
#include "layerdoc/error.hpp"

namespace layerdoc {

namespace detail {

inline void append_escaped(std::string& out, const std::string& value) {
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

inline std::string format_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string format_points(const std::vector<PointF>& vertices) {
  std::string out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) out += ';';
    out += format_coord(vertices[i].x);
    out += ',';
    out += format_coord(vertices[i].y);
  }
  return out;
}

}  // namespace detail

/// Serializes a document to "CVAT for images 1.1" XML. Image elements are
/// ordered by id, shapes by z_order (insertion order breaking ties);
/// attribute order is fixed (label, occluded, points, z_order) and
/// coordinates carry exactly two decimals.
inline std::string write_cvat_xml(const AnnotationDoc& doc) {
  validate_annotation_doc(doc);

  std::vector<const ImageAnnotation*> images;
  images.reserve(doc.images.size());
  for (const ImageAnnotation& image : doc.images) images.push_back(&image);
  std::sort(images.begin(), images.end(),
            [](const ImageAnnotation* a, const ImageAnnotation* b) {
              return a->id < b->id;
            });

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  out += "<annotations>\n";
  out += "  <version>";
  detail::append_escaped(out, doc.version);
  out += "</version>\n";
  for (const ImageAnnotation* image : images) {
    out += "  <image id=\"" + std::to_string(image->id) + "\" name=\"";
    detail::append_escaped(out, image->name);
    out += "\" width=\"" + std::to_string(image->width) + "\" height=\"" +
           std::to_string(image->height) + "\">\n";

    std::vector<const Shape*> shapes;
    shapes.reserve(image->shapes.size());
    for (const Shape& s : image->shapes) shapes.push_back(&s);
    std::stable_sort(shapes.begin(), shapes.end(),
                     [](const Shape* a, const Shape* b) {
                       return a->z_order < b->z_order;
                     });
    for (const Shape* shape : shapes) {
      out += shape->kind == ShapeKind::polygon ? "    <polygon label=\""
                                               : "    <points label=\"";
      detail::append_escaped(out, shape->label);
      out += "\" occluded=\"";
      out += shape->occluded ? '1' : '0';
      out += "\" points=\"";
      detail::append_escaped(out, detail::format_points(shape->vertices));
      out += "\" z_order=\"" + std::to_string(shape->z_order) + "\"/>\n";
    }
    out += "  </image>\n";
  }
  out += "</annotations>\n";
  return out;
}

namespace detail {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlElement> children;
  std::string text;

  const std::string* attr(const std::string& key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

/// Minimal non-validating XML parser covering the subset the CVAT format
/// uses: one root element, attributes, nested elements, character data,
/// comments, the XML declaration, and the five predefined entities plus
/// numeric character references. Errors carry line and column.
class XmlParser {
 public:
  explicit XmlParser(const std::string& src) : src_(src) {}

  XmlElement parse_document() {
    skip_misc();
    if (!starts_with("<")) error("expected root element");
    XmlElement root = parse_element();
    skip_misc();
    if (pos_ != src_.size()) error("trailing content after root element");
    return root;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorKind::parse, "XML parse error at line " + std::to_string(line_) +
                               ", column " + std::to_string(col_) + ": " +
                               message);
  }

  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return eof() ? '\0' : src_[pos_]; }

  char take() {
    if (eof()) error("unexpected end of input");
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void expect(char c) {
    if (peek() != c) {
      error(std::string("expected '") + c + "'");
    }
    take();
  }

  bool starts_with(const char* prefix) const {
    return src_.compare(pos_, std::char_traits<char>::length(prefix),
                        prefix) == 0;
  }

  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) take();
  }

  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }

  static bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
           c == ':';
  }

  static bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
  }

  void skip_ws() {
    while (!eof() && is_space(peek())) take();
  }

  /// Whitespace, comments, processing instructions, XML declaration.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip(4);
        while (!starts_with("-->")) take();
        skip(3);
      } else if (starts_with("<?")) {
        skip(2);
        while (!starts_with("?>")) take();
        skip(2);
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    if (!is_name_start(peek())) error("expected a name");
    std::string name;
    while (!eof() && is_name_char(peek())) name += take();
    return name;
  }

  void append_utf8(std::string& out, unsigned long cp) {
    if (cp <= 0x7F) {
      out += static_cast<char>(cp);
    } else if (cp <= 0x7FF) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp <= 0xFFFF) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp <= 0x10FFFF) {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      error("character reference out of range");
    }
  }

  void parse_entity(std::string& out) {
    expect('&');
    std::string entity;
    while (peek() != ';') {
      if (eof() || is_space(peek())) error("unterminated entity reference");
      entity += take();
    }
    take();  // ';'
    if (entity == "amp") {
      out += '&';
    } else if (entity == "lt") {
      out += '<';
    } else if (entity == "gt") {
      out += '>';
    } else if (entity == "quot") {
      out += '"';
    } else if (entity == "apos") {
      out += '\'';
    } else if (!entity.empty() && entity[0] == '#') {
      const bool hex = entity.size() > 1 && (entity[1] == 'x' ||
                                             entity[1] == 'X');
      const std::string digits = entity.substr(hex ? 2 : 1);
      if (digits.empty()) error("empty character reference");
      unsigned long cp = 0;
      const auto [ptr, ec] = std::from_chars(
          digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        error("invalid character reference \"&" + entity + ";\"");
      }
      append_utf8(out, cp);
    } else {
      error("unknown entity \"&" + entity + ";\"");
    }
  }

  std::string parse_attr_value() {
    const char quote = peek();
    if (quote != '"' && quote != '\'') error("expected quoted attribute value");
    take();
    std::string value;
    while (peek() != quote) {
      if (eof()) error("unterminated attribute value");
      if (peek() == '<') error("'<' in attribute value");
      if (peek() == '&') {
        parse_entity(value);
      } else {
        value += take();
      }
    }
    take();
    return value;
  }

  XmlElement parse_element() {
    expect('<');
    XmlElement element;
    element.name = parse_name();
    for (;;) {
      const bool had_space = !eof() && is_space(peek());
      skip_ws();
      if (starts_with("/>")) {
        skip(2);
        return element;
      }
      if (peek() == '>') {
        take();
        break;
      }
      if (!had_space) error("expected whitespace before attribute");
      const std::string key = parse_name();
      if (element.attr(key)) {
        error("duplicate attribute \"" + key + "\"");
      }
      skip_ws();
      expect('=');
      skip_ws();
      element.attrs.emplace_back(key, parse_attr_value());
    }

    // Content: text, child elements, comments, until the closing tag.
    for (;;) {
      if (eof()) error("missing closing tag for <" + element.name + ">");
      if (starts_with("</")) {
        skip(2);
        const std::string name = parse_name();
        if (name != element.name) {
          error("mismatched closing tag </" + name + "> (expected </" +
                element.name + ">)");
        }
        skip_ws();
        expect('>');
        return element;
      }
      if (starts_with("<!--")) {
        skip(4);
        while (!starts_with("-->")) take();
        skip(3);
      } else if (peek() == '<') {
        element.children.push_back(parse_element());
      } else if (peek() == '&') {
        parse_entity(element.text);
      } else {
        element.text += take();
      }
    }
  }
};

inline std::string trim_copy(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline int parse_int_attr(const XmlElement& element, const std::string& key,
                          const std::string& context) {
  const std::string* raw = element.attr(key);
  if (!raw) {
    fail(ErrorKind::schema,
         context + ": missing required attribute \"" + key + "\"");
  }
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(raw->data(), raw->data() + raw->size(), value);
  if (ec != std::errc() || ptr != raw->data() + raw->size()) {
    fail(ErrorKind::schema, context + ": attribute \"" + key +
                                "\" is not an integer: \"" + *raw + "\"");
  }
  return value;
}

inline std::vector<PointF> parse_points_attr(const std::string& raw,
                                             const std::string& context) {
  std::vector<PointF> vertices;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t stop = raw.find(';', start);
    if (stop == std::string::npos) stop = raw.size();
    const std::string pair = raw.substr(start, stop - start);
    const std::size_t comma = pair.find(',');
    if (comma == std::string::npos || pair.find(',', comma + 1) !=
                                          std::string::npos) {
      fail(ErrorKind::parse,
           context + ": malformed points pair \"" + pair + "\"");
    }
    PointF p;
    const std::string xs = trim_copy(pair.substr(0, comma));
    const std::string ys = trim_copy(pair.substr(comma + 1));
    const auto rx = std::from_chars(xs.data(), xs.data() + xs.size(), p.x);
    const auto ry = std::from_chars(ys.data(), ys.data() + ys.size(), p.y);
    if (rx.ec != std::errc() || rx.ptr != xs.data() + xs.size() ||
        ry.ec != std::errc() || ry.ptr != ys.data() + ys.size()) {
      fail(ErrorKind::parse,
           context + ": malformed points pair \"" + pair + "\"");
    }
    vertices.push_back(p);
    if (stop == raw.size()) break;
    start = stop + 1;
  }
  return vertices;
}

}  // namespace detail

struct CvatReadResult {
  AnnotationDoc doc;
  int warnings = 0;  // unknown elements/attributes skipped during parsing
};

/// Parses "CVAT for images 1.1" XML. Unknown elements and attributes are
/// skipped and counted as warnings; structural problems (bad version,
/// unknown labels, out-of-bounds vertices) are errors.
inline CvatReadResult read_cvat_xml(const std::string& xml) {
  detail::XmlParser parser(xml);
  const detail::XmlElement root = parser.parse_document();
  if (root.name != "annotations") {
    fail(ErrorKind::schema,
         "root element is <" + root.name + ">, expected <annotations>");
  }

  CvatReadResult result;
  bool saw_version = false;
  for (const detail::XmlElement& child : root.children) {
    if (child.name == "version") {
      saw_version = true;
      result.doc.version = detail::trim_copy(child.text);
      if (result.doc.version != "1.1") {
        fail(ErrorKind::unsupported_version,
             "unsupported annotation version \"" + result.doc.version +
                 "\" (expected \"1.1\")");
      }
    } else if (child.name == "image") {
      ImageAnnotation image;
      image.id = detail::parse_int_attr(child, "id", "<image>");
      const std::string context = "image " + std::to_string(image.id);
      const std::string* name = child.attr("name");
      if (!name) {
        fail(ErrorKind::schema, context + ": missing required attribute "
                                          "\"name\"");
      }
      image.name = *name;
      image.width = detail::parse_int_attr(child, "width", context);
      image.height = detail::parse_int_attr(child, "height", context);
      for (const auto& [key, value] : child.attrs) {
        if (key != "id" && key != "name" && key != "width" &&
            key != "height") {
          ++result.warnings;
        }
      }
      for (const detail::XmlElement& node : child.children) {
        if (node.name != "polygon" && node.name != "points") {
          ++result.warnings;
          continue;
        }
        Shape shape;
        shape.kind = node.name == "polygon" ? ShapeKind::polygon
                                            : ShapeKind::points;
        const std::string shape_context =
            context + " <" + node.name + "> shape " +
            std::to_string(image.shapes.size());
        const std::string* label = node.attr("label");
        const std::string* points = node.attr("points");
        if (!label || !points) {
          fail(ErrorKind::schema,
               shape_context + ": missing label or points attribute");
        }
        shape.label = *label;
        shape.vertices = detail::parse_points_attr(*points, shape_context);
        if (const std::string* occluded = node.attr("occluded")) {
          if (*occluded != "0" && *occluded != "1") {
            fail(ErrorKind::schema, shape_context +
                                        ": occluded must be \"0\" or \"1\"");
          }
          shape.occluded = *occluded == "1";
        }
        if (node.attr("z_order")) {
          shape.z_order = detail::parse_int_attr(node, "z_order",
                                                 shape_context);
        }
        for (const auto& [key, value] : node.attrs) {
          if (key != "label" && key != "occluded" && key != "points" &&
              key != "z_order") {
            ++result.warnings;
          }
        }
        image.shapes.push_back(std::move(shape));
      }
      result.doc.images.push_back(std::move(image));
    } else {
      ++result.warnings;
    }
  }
  if (!saw_version) {
    fail(ErrorKind::schema, "document has no <version> element");
  }
  validate_annotation_doc(result.doc);
  return result;
}

}  // namespace layerdoc
