#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nojs/dom.hpp"
#include "nojs/sections.hpp"
#include "nojs/style.hpp"
#include "nojs/text.hpp"

namespace nojs {

enum class FeatureKind {
  large_image,
  form,
  lone_control,
  empty_anchor_button,
  mislinked_fragment_anchor,
  disclosure_button,
  protected_email,
  loader_overlay,
  page_text,
  stylesheets_loaded,
};

inline constexpr std::array<FeatureKind, 10> kAllFeatures = {
    FeatureKind::large_image,          FeatureKind::form,
    FeatureKind::lone_control,         FeatureKind::empty_anchor_button,
    FeatureKind::mislinked_fragment_anchor, FeatureKind::disclosure_button,
    FeatureKind::protected_email,      FeatureKind::loader_overlay,
    FeatureKind::page_text,            FeatureKind::stylesheets_loaded};

inline constexpr std::array<FeatureKind, 5> kInteractiveFeatures = {
    FeatureKind::lone_control, FeatureKind::form, FeatureKind::empty_anchor_button,
    FeatureKind::mislinked_fragment_anchor, FeatureKind::disclosure_button};

inline std::string_view to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::large_image: return "large_image";
    case FeatureKind::form: return "form";
    case FeatureKind::lone_control: return "lone_control";
    case FeatureKind::empty_anchor_button: return "empty_anchor_button";
    case FeatureKind::mislinked_fragment_anchor: return "mislinked_fragment_anchor";
    case FeatureKind::disclosure_button: return "disclosure_button";
    case FeatureKind::protected_email: return "protected_email";
    case FeatureKind::loader_overlay: return "loader_overlay";
    case FeatureKind::page_text: return "page_text";
    case FeatureKind::stylesheets_loaded: return "stylesheets_loaded";
  }
  return "unknown";
}

inline std::optional<FeatureKind> feature_from_string(std::string_view s) {
  for (auto k : kAllFeatures)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline bool is_whole_page_feature(FeatureKind k) {
  return k == FeatureKind::page_text || k == FeatureKind::stylesheets_loaded;
}

// Closed reason-code vocabulary of each detector.
inline std::span<const std::string_view> reason_codes(FeatureKind k) {
  static constexpr std::string_view kImage[] = {
      "src", "srcset", "native_lazy_disabled", "noscript_fallback", "lazy_no_src",
      "lazy_placeholder", "no_source"};
  static constexpr std::string_view kForm[] = {"submit_control", "implicit_submission",
                                               "js_action", "unnamed_control",
                                               "no_submission"};
  static constexpr std::string_view kLone[] = {"stateful_control", "inline_handler",
                                               "no_form_owner"};
  static constexpr std::string_view kEmpty[] = {"go_to_top", "no_target", "empty_href",
                                                "js_noop"};
  static constexpr std::string_view kMislinked[] = {"missing_target"};
  static constexpr std::string_view kDisclosure[] = {"native_details", "css_checkbox_label",
                                                     "scripted_toggle"};
  static constexpr std::string_view kEmail[] = {"placeholder_text", "cfemail_attr"};
  static constexpr std::string_view kOverlay[] = {"visible_overlay", "hidden_overlay"};
  static constexpr std::string_view kText[] = {"has_text", "no_text", "no_body"};
  static constexpr std::string_view kStyle[] = {"stylesheet_link", "style_element", "no_style"};
  switch (k) {
    case FeatureKind::large_image: return kImage;
    case FeatureKind::form: return kForm;
    case FeatureKind::lone_control: return kLone;
    case FeatureKind::empty_anchor_button: return kEmpty;
    case FeatureKind::mislinked_fragment_anchor: return kMislinked;
    case FeatureKind::disclosure_button: return kDisclosure;
    case FeatureKind::protected_email: return kEmail;
    case FeatureKind::loader_overlay: return kOverlay;
    case FeatureKind::page_text: return kText;
    case FeatureKind::stylesheets_loaded: return kStyle;
  }
  return {};
}

struct FeatureVerdict {
  FeatureKind kind{};
  bool broken = false;
  bool visible = true;
  bool in_main = true;
  std::string node_path;
  std::string detail;
  NodeId node{};

  bool operator==(const FeatureVerdict&) const = default;
};

struct DetectorConfig {
  std::vector<std::string> lazy_attrs = {"data-src", "data-srcset", "data-original",
                                         "data-lazy-src", "data-echo"};
  std::vector<std::string> disclosure_classes = {"dropdown-toggle", "accordion-button",
                                                 "accordion-toggle", "navbar-toggler"};
  int large_image_min_px = 100;
  // `href="#"` / `#top` anchors scroll to the top natively.
  bool go_to_top_working = true;

  bool operator==(const DetectorConfig&) const = default;
};

// Everything a detector reads, computed once per document.
class PageContext {
 public:
  PageContext(const DomDocument& doc, const SectionMap& sections, const DetectorConfig& cfg = {})
      : doc_(doc), sections_(sections), cfg_(cfg), visible_(visibility_map(doc)) {}

  const DomDocument& doc() const { return doc_; }
  const SectionMap& sections() const { return sections_; }
  const DetectorConfig& config() const { return cfg_; }
  bool visible(NodeId id) const { return visible_[index_of(id)]; }

  FeatureVerdict verdict(FeatureKind kind, NodeId node, bool broken, std::string_view detail) const {
    FeatureVerdict v;
    v.kind = kind;
    v.broken = broken;
    v.node = node;
    v.node_path = doc_.node_path(node);
    v.detail = std::string(detail);
    if (is_whole_page_feature(kind)) {
      v.visible = true;
      v.in_main = true;
    } else {
      v.visible = visible(node);
      v.in_main = sections_.in_main(node);
    }
    return v;
  }

 private:
  const DomDocument& doc_;
  const SectionMap& sections_;
  const DetectorConfig& cfg_;
  std::vector<bool> visible_;
};

namespace detect_detail {

inline bool has_noscript_ancestor(const DomDocument& doc, NodeId id) {
  return doc.closest_ancestor(id, "noscript").has_value();
}

inline bool is_data_url(std::string_view url) { return text::istarts_with(text::trim(url), "data:"); }

inline bool is_real_url(const std::string* v) {
  return v && !text::is_blank(*v) && !is_data_url(*v);
}

inline bool has_lazy_attr(const DomNode& n, const DetectorConfig& cfg) {
  for (const auto& a : cfg.lazy_attrs)
    if (const std::string* v = n.attr(a); v && !text::is_blank(*v)) return true;
  return false;
}

inline bool noscript_has_real_img(const DomDocument& doc, NodeId noscript) {
  auto end = index_of(doc.subtree_end(noscript));
  for (auto i = index_of(noscript) + 1; i <= end; ++i) {
    const DomNode& d = doc.node(NodeId{i});
    if (d.is_element("img") && (is_real_url(d.attr("src")) || is_real_url(d.attr("srcset"))))
      return true;
  }
  return false;
}

// A <noscript> next to the image, or next to its parent, that supplies an
// <img> with a fetchable source.
inline bool has_noscript_fallback(const DomDocument& doc, NodeId image) {
  std::optional<NodeId> level = image;
  for (int depth = 0; depth < 2 && level; ++depth) {
    const DomNode& n = doc.node(*level);
    if (!n.parent) break;
    for (NodeId sib : doc.node(*n.parent).children)
      if (sib != *level && doc.node(sib).is_element("noscript") && noscript_has_real_img(doc, sib))
        return true;
    level = doc.parent_element(*level);
  }
  return false;
}

}  // namespace detect_detail

// Large images (img and picture). An img inside picture is evaluated as
// part of the picture; images inside noscript are fallback content and not
// counted on their own.
inline std::vector<FeatureVerdict> detect_images(const PageContext& ctx) {
  using namespace detect_detail;
  const auto& doc = ctx.doc();
  const auto& cfg = ctx.config();
  std::vector<FeatureVerdict> out;
  for (const auto& n : doc.nodes()) {
    bool is_picture = n.is_element("picture");
    if (!is_picture && !n.is_element("img")) continue;
    if (has_noscript_ancestor(doc, n.id)) continue;
    if (!is_picture) {
      auto parent = doc.parent_element(n.id);
      if (parent && doc.node(*parent).is_element("picture")) continue;
    }

    const DomNode* img = is_picture ? nullptr : &n;
    std::vector<const DomNode*> sources;
    if (is_picture) {
      for (NodeId c : n.children) {
        const DomNode& k = doc.node(c);
        if (k.is_element("source")) sources.push_back(&k);
        if (k.is_element("img") && !img) img = &k;
      }
    }

    Geometry geom = img ? approximate_geometry(*img) : Geometry{};
    if (!geom.width && !geom.height) geom = approximate_geometry(n);

    bool lazy = (img && has_lazy_attr(*img, cfg)) || (is_picture && has_lazy_attr(n, cfg));
    for (const auto* s : sources) lazy = lazy || has_lazy_attr(*s, cfg);

    // A declared 1x1 size marks a placeholder, not the final image.
    bool placeholder_size = geom.width == 1 && geom.height == 1;
    if (lazy && placeholder_size) geom = Geometry{};

    const std::string* src = img ? img->attr("src") : nullptr;
    bool real_src = is_real_url(src) && !(lazy && placeholder_size);
    bool real_srcset = img && is_real_url(img->attr("srcset"));
    for (const auto* s : sources) real_srcset = real_srcset || is_real_url(s->attr("srcset"));

    int min = cfg.large_image_min_px;
    bool large = (!geom.width || *geom.width >= min) && (!geom.height || *geom.height >= min);
    if (!large) continue;

    bool broken = false;
    std::string_view reason;
    if (!real_src && !real_srcset && lazy) {
      if (has_noscript_fallback(doc, n.id)) {
        reason = "noscript_fallback";
      } else {
        broken = true;
        reason = (src && !text::is_blank(*src)) ? "lazy_placeholder" : "lazy_no_src";
      }
    } else if (real_src || real_srcset) {
      if (img && text::iequals(text::trim(img->attr_or("loading")), "lazy"))
        reason = "native_lazy_disabled";
      else
        reason = real_src ? "src" : "srcset";
    } else {
      reason = "no_source";
    }
    out.push_back(ctx.verdict(FeatureKind::large_image, n.id, broken, reason));
  }
  return out;
}

namespace form_detail {

inline std::string input_type(const DomNode& n) {
  auto t = text::to_ascii_lower(text::trim(n.attr_or("type")));
  static constexpr std::string_view kKnown[] = {
      "hidden", "text", "search", "tel", "url", "email", "password", "date", "month",
      "week", "time", "datetime-local", "number", "range", "color", "checkbox", "radio",
      "file", "submit", "image", "reset", "button"};
  for (auto k : kKnown)
    if (t == k) return t;
  return "text";
}

inline bool is_listed_control(const DomNode& n) {
  return n.is_element("input") || n.is_element("button") || n.is_element("select") ||
         n.is_element("textarea");
}

inline bool is_single_line_text(const DomNode& n) {
  if (!n.is_element("input")) return false;
  static constexpr std::string_view kTextual[] = {"text", "search", "url", "tel", "email",
                                                  "password", "number", "date", "month",
                                                  "week", "time", "datetime-local"};
  auto t = input_type(n);
  for (auto k : kTextual)
    if (t == k) return true;
  return false;
}

inline bool is_submit_control(const DomNode& n) {
  if (n.is_element("button")) {
    auto t = text::to_ascii_lower(text::trim(n.attr_or("type")));
    return t != "button" && t != "reset";
  }
  if (n.is_element("input")) {
    auto t = input_type(n);
    return t == "submit" || t == "image";
  }
  return false;
}

// Controls whose value is only submitted under a name.
inline bool carries_named_value(const DomNode& n) {
  if (n.is_element("select") || n.is_element("textarea")) return true;
  if (!n.is_element("input")) return false;
  auto t = input_type(n);
  return t != "submit" && t != "image" && t != "reset" && t != "button";
}

inline bool has_inline_handler(const DomNode& n) {
  for (const auto& a : n.attributes)
    if (a.name.size() > 2 && a.name.starts_with("on")) return true;
  return false;
}

}  // namespace form_detail

// Form owner of a listed control: the element named by its `form`
// attribute when present (and a form), else the nearest form ancestor.
inline std::optional<NodeId> form_owner(const DomDocument& doc, NodeId control) {
  const DomNode& n = doc.node(control);
  if (const std::string* f = n.attr("form")) {
    auto target = doc.element_by_id(*f);
    if (target && doc.node(*target).is_element("form")) return target;
    return std::nullopt;
  }
  return doc.closest_ancestor(control, "form");
}

inline std::vector<NodeId> form_controls(const DomDocument& doc, NodeId form) {
  std::vector<NodeId> out;
  for (const auto& n : doc.nodes()) {
    if (!form_detail::is_listed_control(n)) continue;
    if (auto owner = form_owner(doc, n.id); owner && *owner == form) out.push_back(n.id);
  }
  return out;
}

// Implicit submission needs at most one single-line text control.
inline bool implicit_submission_possible(const DomDocument& doc, std::span<const NodeId> controls) {
  int text_controls = 0;
  for (NodeId c : controls)
    if (form_detail::is_single_line_text(doc.node(c))) ++text_controls;
  return text_controls <= 1;
}

inline std::vector<FeatureVerdict> detect_forms(const PageContext& ctx) {
  using namespace form_detail;
  const auto& doc = ctx.doc();
  std::vector<FeatureVerdict> out;
  // Owner lookup once per control instead of once per (form, control).
  std::vector<std::vector<NodeId>> owned(doc.size());
  for (const auto& n : doc.nodes()) {
    if (!is_listed_control(n)) continue;
    if (auto owner = form_owner(doc, n.id)) owned[index_of(*owner)].push_back(n.id);
  }
  for (const auto& n : doc.nodes()) {
    if (!n.is_element("form")) continue;
    const auto& controls = owned[index_of(n.id)];
    bool js_action = text::istarts_with(text::trim(n.attr_or("action")), "javascript:");
    bool unnamed = false;
    bool has_submit = false;
    for (NodeId c : controls) {
      const DomNode& k = doc.node(c);
      if (carries_named_value(k) && text::is_blank(k.attr_or("name"))) unnamed = true;
      if (is_submit_control(k)) has_submit = true;
    }
    bool implicit = implicit_submission_possible(doc, controls);
    std::string_view reason;
    bool broken = true;
    if (js_action) reason = "js_action";
    else if (unnamed) reason = "unnamed_control";
    else if (!has_submit && !implicit) reason = "no_submission";
    else {
      broken = false;
      reason = has_submit ? "submit_control" : "implicit_submission";
    }
    out.push_back(ctx.verdict(FeatureKind::form, n.id, broken, reason));
  }
  return out;
}

struct FormInput {
  std::vector<std::pair<std::string, std::string>> values;  // name -> typed value
  std::vector<std::string> checked;                          // names of checked boxes
};

// The query string a GET submission of `form` would produce, using
// application/x-www-form-urlencoded serialization.
inline std::string form_query(const DomDocument& doc, NodeId form, const FormInput& input = {}) {
  using namespace form_detail;
  auto encode = [](std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (char ch : s) {
      auto c = static_cast<unsigned char>(ch);
      if (std::isalnum(c) || c == '*' || c == '-' || c == '.' || c == '_') out.push_back(ch);
      else if (c == ' ') out.push_back('+');
      else {
        out.push_back('%');
        out.push_back(kHex[c >> 4]);
        out.push_back(kHex[c & 15]);
      }
    }
    return out;
  };
  std::string query;
  auto add = [&](std::string_view name, std::string_view value) {
    if (!query.empty()) query.push_back('&');
    query += encode(name) + "=" + encode(value);
  };
  for (NodeId c : form_controls(doc, form)) {
    const DomNode& k = doc.node(c);
    std::string name(text::trim(k.attr_or("name")));
    if (name.empty() || !carries_named_value(k) || k.has_attr("disabled")) continue;
    auto type = k.is_element("input") ? input_type(k) : std::string(k.tag);
    if (type == "checkbox" || type == "radio") {
      bool on = k.has_attr("checked");
      for (const auto& n : input.checked)
        if (n == name) on = true;
      if (on) add(name, k.has_attr("value") ? k.attr_or("value") : "on");
      continue;
    }
    std::string value(k.attr_or("value"));
    if (k.is_element("textarea")) value = text_content(doc, c);
    for (const auto& [n, v] : input.values)
      if (n == name) value = v;
    add(name, value);
  }
  return query;
}

namespace disclosure_detail {

inline std::optional<NodeId> label_target_toggle(const DomDocument& doc, const DomNode& label) {
  if (!label.is_element("label")) return std::nullopt;
  const std::string* target = label.attr("for");
  if (!target) return std::nullopt;
  auto t = doc.element_by_id(*target);
  if (!t) return std::nullopt;
  const DomNode& input = doc.node(*t);
  if (!input.is_element("input")) return std::nullopt;
  auto type = form_detail::input_type(input);
  if (type != "checkbox" && type != "radio") return std::nullopt;
  return t;
}

inline bool is_native_summary(const DomDocument& doc, const DomNode& n) {
  if (!n.is_element("summary")) return false;
  auto parent = doc.parent_element(n.id);
  return parent && doc.node(*parent).is_element("details");
}

inline bool has_disclosure_marker(const DomNode& n, const DetectorConfig& cfg) {
  if (n.has_attr("aria-expanded") || n.has_attr("aria-controls") || n.has_attr("data-toggle") ||
      n.has_attr("data-bs-toggle"))
    return true;
  if (const std::string* v = n.attr("aria-haspopup"); v && !text::iequals(text::trim(*v), "false"))
    return true;
  if (const std::string* c = n.attr("class")) {
    for (auto token : text::split_whitespace(*c))
      for (const auto& wanted : cfg.disclosure_classes)
        if (token == wanted) return true;
  }
  return false;
}

// Disclosure candidates take precedence over the other interactive kinds so
// that one element is counted once in the interactive aggregate.
inline bool is_disclosure_candidate(const DomDocument& doc, const DomNode& n, const DetectorConfig& cfg) {
  if (!n.is_element()) return false;
  if (is_native_summary(doc, n) || has_disclosure_marker(n, cfg)) return true;
  auto toggle = label_target_toggle(doc, n);
  return toggle && !form_owner(doc, *toggle);
}

}  // namespace disclosure_detail

inline std::vector<FeatureVerdict> detect_lone_controls(const PageContext& ctx) {
  using namespace form_detail;
  const auto& doc = ctx.doc();
  std::vector<FeatureVerdict> out;
  for (const auto& n : doc.nodes()) {
    if (!is_listed_control(n)) continue;
    if (form_owner(doc, n.id)) continue;
    if (disclosure_detail::is_disclosure_candidate(doc, n, ctx.config())) continue;
    std::string_view reason;
    bool broken = true;
    if (has_inline_handler(n)) {
      reason = "inline_handler";
    } else if (n.is_element("input") && (input_type(n) == "checkbox" || input_type(n) == "radio")) {
      broken = false;
      reason = "stateful_control";
    } else {
      reason = "no_form_owner";
    }
    out.push_back(ctx.verdict(FeatureKind::lone_control, n.id, broken, reason));
  }
  return out;
}

namespace anchor_detail {

// `javascript:` URLs that do nothing when followed.
inline bool is_noop_javascript(std::string_view href) {
  auto h = text::trim(href);
  if (!text::istarts_with(h, "javascript:")) return false;
  std::string body;
  for (char c : text::percent_decode(h.substr(11)))
    if (!text::is_ascii_whitespace(c)) body.push_back(text::ascii_lower(c));
  while (!body.empty() && body.back() == ';') body.pop_back();
  static constexpr std::string_view kNoops[] = {
      "", "void(0)", "void0", "void(null)", "void(false)", "void(undefined)", "undefined",
      "null", "false", "0", "returnfalse", "{}", "void(0)returnfalse"};
  for (auto n : kNoops)
    if (body == n) return true;
  return false;
}

inline std::optional<std::string> same_page_fragment(std::string_view href) {
  auto h = text::trim(href);
  if (h.empty() || h[0] != '#') return std::nullopt;
  return text::percent_decode(h.substr(1));
}

inline bool fragment_resolves(const DomDocument& doc, std::string_view fragment) {
  if (doc.element_by_id(fragment)) return true;
  for (const auto& n : doc.nodes())
    if (n.is_element("a") && n.attr_or("name") == fragment) return true;
  return false;
}

}  // namespace anchor_detail

inline std::vector<FeatureVerdict> detect_empty_anchor_buttons(const PageContext& ctx) {
  using namespace anchor_detail;
  const auto& doc = ctx.doc();
  const bool top_ok = ctx.config().go_to_top_working;
  std::vector<FeatureVerdict> out;
  for (const auto& n : doc.nodes()) {
    if (!n.is_element("a")) continue;
    if (disclosure_detail::is_disclosure_candidate(doc, n, ctx.config())) continue;
    const std::string* href = n.attr("href");
    std::string_view reason;
    bool broken = true;
    if (!href) {
      if (n.has_attr("name") || n.has_attr("id")) continue;
      reason = "no_target";
    } else if (text::trim(*href).empty()) {
      reason = "empty_href";
    } else if (auto frag = same_page_fragment(*href);
               frag && (frag->empty() || (text::iequals(*frag, "top") && !fragment_resolves(doc, *frag)))) {
      reason = "go_to_top";
      broken = !top_ok;
    } else if (is_noop_javascript(*href)) {
      reason = "js_noop";
    } else {
      continue;
    }
    out.push_back(ctx.verdict(FeatureKind::empty_anchor_button, n.id, broken, reason));
  }
  return out;
}

inline std::vector<FeatureVerdict> detect_mislinked_fragment_anchors(const PageContext& ctx) {
  using namespace anchor_detail;
  const auto& doc = ctx.doc();
  std::vector<std::string_view> names;
  for (const auto& n : doc.nodes())
    if (n.is_element("a"))
      if (const std::string* nm = n.attr("name")) names.push_back(*nm);
  std::vector<FeatureVerdict> out;
  for (const auto& n : doc.nodes()) {
    if (!n.is_element("a")) continue;
    if (disclosure_detail::is_disclosure_candidate(doc, n, ctx.config())) continue;
    const std::string* href = n.attr("href");
    if (!href) continue;
    auto frag = same_page_fragment(*href);
    if (!frag || frag->empty() || text::iequals(*frag, "top")) continue;
    if (doc.element_by_id(*frag)) continue;
    if (std::find(names.begin(), names.end(), *frag) != names.end()) continue;
    out.push_back(ctx.verdict(FeatureKind::mislinked_fragment_anchor, n.id, true, "missing_target"));
  }
  return out;
}


// Disclosure buttons: marked toggles, native <summary>, and labels driving
// a form-less checkbox/radio (the CSS :checked pattern).
inline std::vector<FeatureVerdict> detect_disclosure_buttons(const PageContext& ctx) {
  using namespace disclosure_detail;
  const auto& doc = ctx.doc();
  std::vector<FeatureVerdict> out;
  for (const auto& n : doc.nodes()) {
    if (!n.is_element()) continue;
    if (!is_disclosure_candidate(doc, n, ctx.config())) continue;
    bool native = is_native_summary(doc, n);
    bool css_label = label_target_toggle(doc, n).has_value();
    if (native)
      out.push_back(ctx.verdict(FeatureKind::disclosure_button, n.id, false, "native_details"));
    else if (css_label)
      out.push_back(ctx.verdict(FeatureKind::disclosure_button, n.id, false, "css_checkbox_label"));
    else
      out.push_back(ctx.verdict(FeatureKind::disclosure_button, n.id, true, "scripted_toggle"));
  }
  return out;
}

namespace email_detail {

inline bool contains_placeholder(std::string_view s) {
  // Cloudflare writes "[email&#160;protected]"; plain-space variants exist too.
  return s.find("[email protected]") != std::string_view::npos ||
         s.find("[email\xC2\xA0protected]") != std::string_view::npos;
}

}  // namespace email_detail

inline std::vector<FeatureVerdict> detect_protected_emails(const PageContext& ctx) {
  const auto& doc = ctx.doc();
  std::vector<FeatureVerdict> out;
  // Subtree end of the innermost data-cfemail element / script / style we
  // are currently inside; nodes up to it are covered or excluded.
  std::uint32_t covered_until = 0;
  bool covering = false;
  for (const auto& n : doc.nodes()) {
    auto idx = index_of(n.id);
    if (covering && idx > covered_until) covering = false;
    if (covering) continue;
    if (n.is_element("script") || n.is_element("style")) {
      covering = true;
      covered_until = index_of(doc.subtree_end(n.id));
      continue;
    }
    if (n.is_element() && n.has_attr("data-cfemail")) {
      out.push_back(ctx.verdict(FeatureKind::protected_email, n.id, true, "cfemail_attr"));
      covering = true;
      covered_until = index_of(doc.subtree_end(n.id));
      continue;
    }
    if (n.is_text() && email_detail::contains_placeholder(n.text))
      out.push_back(ctx.verdict(FeatureKind::protected_email, n.id, true, "placeholder_text"));
  }
  return out;
}

inline std::vector<FeatureVerdict> detect_loader_overlays(const PageContext& ctx) {
  const auto& doc = ctx.doc();
  std::vector<FeatureVerdict> out;
  auto body = doc.body();
  if (!body) return out;
  for (NodeId c : doc.node(*body).children) {
    const DomNode& n = doc.node(c);
    if (!n.is_element("div")) continue;
    bool match = n.attr_or("id") == "preloader";
    for (auto token : text::split_whitespace(n.attr_or("class")))
      if (text::icontains(token, "preloader")) match = true;
    if (!match) continue;
    bool shown = ctx.visible(c);
    out.push_back(ctx.verdict(FeatureKind::loader_overlay, c, shown,
                              shown ? "visible_overlay" : "hidden_overlay"));
  }
  return out;
}

inline FeatureVerdict check_page_text(const PageContext& ctx) {
  const auto& doc = ctx.doc();
  auto body = doc.body();
  if (!body) {
    NodeId at = doc.html().value_or(doc.root().id);
    return ctx.verdict(FeatureKind::page_text, at, true, "no_body");
  }
  bool blank = text::is_blank(text_content(doc, *body));
  return ctx.verdict(FeatureKind::page_text, *body, blank, blank ? "no_text" : "has_text");
}

inline FeatureVerdict check_stylesheets(const PageContext& ctx) {
  const auto& doc = ctx.doc();
  for (const auto& n : doc.nodes()) {
    if (n.is_element("link")) {
      auto rel = n.attr_or("rel");
      if (text::has_token_ci(rel, "stylesheet") && !text::has_token_ci(rel, "alternate") &&
          !text::is_blank(n.attr_or("href")))
        return ctx.verdict(FeatureKind::stylesheets_loaded, n.id, false, "stylesheet_link");
    } else if (n.is_element("style")) {
      if (!text::is_blank(text_content(doc, n.id)))
        return ctx.verdict(FeatureKind::stylesheets_loaded, n.id, false, "style_element");
    }
  }
  NodeId at = doc.html().value_or(doc.root().id);
  return ctx.verdict(FeatureKind::stylesheets_loaded, at, true, "no_style");
}

// Runs every detector; verdicts are grouped by kind in kAllFeatures order.
inline std::vector<FeatureVerdict> detect_all(const PageContext& ctx) {
  std::vector<FeatureVerdict> out;
  auto append = [&](std::vector<FeatureVerdict> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  append(detect_images(ctx));
  append(detect_forms(ctx));
  append(detect_lone_controls(ctx));
  append(detect_empty_anchor_buttons(ctx));
  append(detect_mislinked_fragment_anchors(ctx));
  append(detect_disclosure_buttons(ctx));
  append(detect_protected_emails(ctx));
  append(detect_loader_overlays(ctx));
  out.push_back(check_page_text(ctx));
  out.push_back(check_stylesheets(ctx));
  return out;
}

}  // namespace nojs
