#pragma once

#include <string_view>
#include <vector>

#include "nojs/dom.hpp"
#include "nojs/selector.hpp"

namespace nojs {

enum class SectionLabel { unknown, header, footer, aside, nav, main };

inline std::string_view to_string(SectionLabel l) {
  switch (l) {
    case SectionLabel::header: return "header";
    case SectionLabel::footer: return "footer";
    case SectionLabel::aside: return "aside";
    case SectionLabel::nav: return "nav";
    case SectionLabel::main: return "main";
    case SectionLabel::unknown: break;
  }
  return "unknown";
}

struct SectionConfig {
  SelectorList main_selectors = SelectorList::parse("main, #main, .main");
  SelectorList header_selectors = SelectorList::parse("header, #header, .header");
  SelectorList footer_selectors = SelectorList::parse("footer, #footer, .footer");
  SelectorList aside_selectors = SelectorList::parse("aside");
  // Not part of the default vocabulary; configurable for experiments.
  SelectorList nav_selectors;

  bool operator==(const SectionConfig&) const = default;
};

// Per-node section labels plus the document-level facts needed to decide
// main-section membership.
class SectionMap {
 public:
  SectionLabel label(NodeId id) const { return labels_[index_of(id)]; }
  const std::vector<SectionLabel>& labels() const { return labels_; }

  bool has_main() const { return has_main_; }
  bool has_any_section() const { return has_any_; }

  // Explicit main wins; without one, whatever is not header/footer/aside/nav
  // is main; with no structural markup at all the whole page is main.
  bool in_main(NodeId id) const {
    if (has_main_) return label(id) == SectionLabel::main;
    if (has_any_) return label(id) == SectionLabel::unknown;
    return true;
  }

 private:
  friend SectionMap classify_sections(const DomDocument&, const SectionConfig&);
  std::vector<SectionLabel> labels_;
  bool has_main_ = false;
  bool has_any_ = false;
};

inline SectionLabel own_section(const DomNode& n, const SectionConfig& cfg) {
  if (!n.is_element()) return SectionLabel::unknown;
  // Fixed precedence when one element matches several rows.
  if (cfg.main_selectors.matches(n)) return SectionLabel::main;
  if (cfg.header_selectors.matches(n)) return SectionLabel::header;
  if (cfg.footer_selectors.matches(n)) return SectionLabel::footer;
  if (cfg.aside_selectors.matches(n)) return SectionLabel::aside;
  if (cfg.nav_selectors.matches(n)) return SectionLabel::nav;
  return SectionLabel::unknown;
}

// Each node takes the label of its nearest matching ancestor-or-self
// (deepest match wins); text nodes follow their parent.
inline SectionMap classify_sections(const DomDocument& doc, const SectionConfig& cfg = {}) {
  SectionMap map;
  map.labels_.assign(doc.size(), SectionLabel::unknown);
  for (const auto& n : doc.nodes()) {
    SectionLabel own = own_section(n, cfg);
    SectionLabel inherited = n.parent ? map.labels_[index_of(*n.parent)] : SectionLabel::unknown;
    map.labels_[index_of(n.id)] = own != SectionLabel::unknown ? own : inherited;
    if (own == SectionLabel::main) map.has_main_ = true;
    if (own != SectionLabel::unknown) map.has_any_ = true;
  }
  return map;
}

inline bool in_main_section(const SectionMap& map, NodeId id) { return map.in_main(id); }

}  // namespace nojs
