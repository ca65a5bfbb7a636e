#pragma once

#include <string_view>

namespace nojs {

// How much a standard HTML element relies on JavaScript:
//   r0              never needs it
//   r1              works without, sometimes enhanced by scripts
//   r1_nonsemantic  works without, but often abused as a scripted button
//   r2              needs it in some use cases
//   r2_outside_form usually needs it when not inside a form
//   r3              always needs it
enum class JsRelianceClass { r0, r1, r1_nonsemantic, r2, r2_outside_form, r3 };

inline std::string_view to_string(JsRelianceClass c) {
  switch (c) {
    case JsRelianceClass::r0: return "r0";
    case JsRelianceClass::r1: return "r1";
    case JsRelianceClass::r1_nonsemantic: return "r1_nonsemantic";
    case JsRelianceClass::r2: return "r2";
    case JsRelianceClass::r2_outside_form: return "r2_outside_form";
    case JsRelianceClass::r3: return "r3";
  }
  return "r0";
}

struct RelianceContext {
  bool in_form = false;
};

namespace reliance_detail {

struct Entry {
  std::string_view tag;
  JsRelianceClass cls;
  bool form_dependent = false;  // the 2* rows
};

using enum JsRelianceClass;

inline constexpr Entry kTable[] = {
    {"html", r0},
    // document metadata
    {"base", r0}, {"head", r0}, {"link", r1}, {"meta", r0}, {"style", r0}, {"title", r0},
    {"body", r0},
    // content sectioning
    {"address", r0}, {"article", r0}, {"aside", r0}, {"footer", r0}, {"header", r0},
    {"h1", r0}, {"h2", r0}, {"h3", r0}, {"h4", r0}, {"h5", r0}, {"h6", r0},
    {"main", r0}, {"nav", r0}, {"section", r0},
    // text content
    {"blockquote", r0}, {"dd", r0}, {"div", r1_nonsemantic}, {"dl", r0}, {"dt", r0},
    {"figcaption", r0}, {"figure", r0}, {"hr", r0}, {"li", r0}, {"ol", r0}, {"p", r0},
    {"pre", r0}, {"ul", r0},
    // tables
    {"caption", r0}, {"col", r0}, {"colgroup", r0}, {"table", r0}, {"tbody", r0},
    {"td", r0}, {"tfoot", r0}, {"th", r0}, {"thead", r0}, {"tr", r0},
    // edits
    {"del", r0}, {"ins", r0},
    // inline text semantics
    {"a", r1_nonsemantic}, {"abbr", r0}, {"b", r0}, {"bdi", r0}, {"bdo", r0}, {"br", r0},
    {"cite", r0}, {"code", r0}, {"data", r0}, {"dfn", r0}, {"em", r0}, {"i", r0},
    {"kbd", r0}, {"mark", r0}, {"q", r0}, {"rp", r0}, {"rt", r0}, {"ruby", r0}, {"s", r0},
    {"samp", r0}, {"small", r0}, {"span", r1_nonsemantic}, {"strong", r0}, {"sub", r0},
    {"sup", r0}, {"time", r0}, {"u", r0}, {"var", r0}, {"wbr", r0},
    // image and multimedia
    {"area", r0}, {"audio", r1}, {"img", r1}, {"map", r0}, {"track", r0}, {"video", r1},
    // embedded content
    {"embed", r0}, {"iframe", r0}, {"object", r0}, {"param", r0}, {"picture", r0},
    {"portal", r0}, {"source", r1},
    {"svg", r1}, {"math", r0},
    // scripting
    {"canvas", r3}, {"noscript", r0}, {"script", r2},
    // forms
    {"button", r2_outside_form, true}, {"datalist", r2_outside_form, true},
    {"fieldset", r0}, {"form", r2}, {"input", r2_outside_form, true}, {"label", r0},
    {"legend", r0}, {"meter", r2_outside_form, true}, {"optgroup", r2_outside_form, true},
    {"option", r2_outside_form, true}, {"progress", r2_outside_form, true},
    {"select", r2_outside_form, true}, {"textarea", r2_outside_form, true},
};

}  // namespace reliance_detail

// Reliance class of `tag` (lowercase). Form-dependent elements count as r0
// inside a form; tags outside the table are treated as non-semantic.
inline JsRelianceClass element_js_reliance(std::string_view tag, RelianceContext ctx = {}) {
  for (const auto& e : reliance_detail::kTable) {
    if (e.tag != tag) continue;
    if (e.form_dependent && ctx.in_form) return JsRelianceClass::r0;
    return e.cls;
  }
  return JsRelianceClass::r1_nonsemantic;
}

inline bool is_known_element(std::string_view tag) {
  for (const auto& e : reliance_detail::kTable)
    if (e.tag == tag) return true;
  return false;
}

}  // namespace nojs
