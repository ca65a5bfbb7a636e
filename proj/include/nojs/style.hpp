#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nojs/dom.hpp"
#include "nojs/text.hpp"

namespace nojs {

struct StyleDeclaration {
  std::string property;  // lowercased
  std::string value;     // lowercased, trimmed, without !important
  bool important = false;

  bool operator==(const StyleDeclaration&) const = default;
};

// Parses the declarations of an inline `style` attribute. Malformed
// declarations (no colon, empty property) are skipped.
inline std::vector<StyleDeclaration> parse_inline_style(std::string_view style) {
  std::vector<StyleDeclaration> out;
  for (auto decl : text::split(style, ';')) {
    size_t colon = decl.find(':');
    if (colon == std::string_view::npos) continue;
    auto prop = text::trim(decl.substr(0, colon));
    if (prop.empty()) continue;
    std::string value = text::to_ascii_lower(text::trim(decl.substr(colon + 1)));
    bool important = false;
    if (auto bang = value.rfind('!'); bang != std::string::npos &&
                                      text::trim(std::string_view(value).substr(bang + 1)) ==
                                          "important") {
      important = true;
      value = std::string(text::trim(std::string_view(value).substr(0, bang)));
    }
    out.push_back({text::to_ascii_lower(prop), std::move(value), important});
  }
  return out;
}

// Last declaration wins unless an earlier one is !important.
inline std::optional<std::string> style_property(std::string_view style, std::string_view property) {
  std::optional<std::string> value;
  bool important = false;
  for (auto& d : parse_inline_style(style)) {
    if (d.property != property) continue;
    if (important && !d.important) continue;
    value = std::move(d.value);
    important = d.important;
  }
  return value;
}

// True when the element itself carries a hiding marker.
inline bool hides_itself(const DomNode& n) {
  if (!n.is_element()) return false;
  if (n.has_attr("hidden")) return true;
  if (const std::string* v = n.attr("aria-hidden"); v && text::iequals(text::trim(*v), "true"))
    return true;
  if (const std::string* v = n.attr("type"); v && text::iequals(text::trim(*v), "hidden"))
    return true;
  if (const std::string* s = n.attr("style")) {
    if (auto d = style_property(*s, "display"); d && *d == "none") return true;
    if (auto v = style_property(*s, "visibility"); v && *v == "hidden")
      return true;
  }
  return false;
}

// Static visibility: false iff the node or an ancestor hides itself.
// External stylesheets are not consulted.
inline bool is_visible(const DomDocument& doc, NodeId id) {
  std::optional<NodeId> cur = id;
  while (cur) {
    const DomNode& n = doc.node(*cur);
    if (hides_itself(n)) return false;
    cur = n.parent;
  }
  return true;
}

// Precomputed visibility for every node, one pass in document order.
inline std::vector<bool> visibility_map(const DomDocument& doc) {
  std::vector<bool> visible(doc.size(), true);
  for (const auto& n : doc.nodes()) {
    bool v = !hides_itself(n);
    if (n.parent && !visible[index_of(*n.parent)]) v = false;
    visible[index_of(n.id)] = v;
  }
  return visible;
}

struct Geometry {
  std::optional<int> width;
  std::optional<int> height;

  bool operator==(const Geometry&) const = default;
  bool known() const { return width && height; }
};

namespace style_detail {

// "200", "200px", "200.5" -> 200. Percentages and other units -> unknown.
inline std::optional<int> parse_pixels(std::string_view raw, bool require_unit) {
  auto s = text::trim(raw);
  if (s.ends_with("px") || s.ends_with("PX")) {
    s.remove_suffix(2);
    s = text::trim(s);
  } else if (require_unit && s != "0") {
    return std::nullopt;
  }
  size_t dot = s.find('.');
  auto whole = s.substr(0, dot);
  if (dot != std::string_view::npos) {
    auto frac = s.substr(dot + 1);
    for (char c : frac)
      if (c < '0' || c > '9') return std::nullopt;
  }
  auto v = text::parse_non_negative(whole);
  if (!v || *v > 1'000'000) return std::nullopt;
  return static_cast<int>(*v);
}

}  // namespace style_detail

// Declared size of an img/picture/source. Inline style beats attributes,
// like CSS beats presentational hints.
inline Geometry approximate_geometry(const DomNode& n) {
  Geometry g;
  if (const std::string* w = n.attr("width")) g.width = style_detail::parse_pixels(*w, false);
  if (const std::string* h = n.attr("height")) g.height = style_detail::parse_pixels(*h, false);
  if (const std::string* s = n.attr("style")) {
    if (auto w = style_property(*s, "width"))
      if (auto px = style_detail::parse_pixels(*w, true)) g.width = px;
    if (auto h = style_property(*s, "height"))
      if (auto px = style_detail::parse_pixels(*h, true)) g.height = px;
  }
  return g;
}

}  // namespace nojs
