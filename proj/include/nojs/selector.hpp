#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nojs/dom.hpp"
#include "nojs/errors.hpp"
#include "nojs/text.hpp"

namespace nojs {

// One compound of the accepted grammar: an optional tag followed by any
// number of `#id` / `.class` parts. No combinators, no attribute selectors.
struct CompoundSelector {
  std::optional<std::string> tag;  // lowercased
  std::optional<std::string> id;
  std::set<std::string> classes;

  bool operator==(const CompoundSelector&) const = default;

  bool matches(const DomNode& n) const {
    if (!n.is_element()) return false;
    if (tag && n.tag != *tag) return false;
    if (id) {
      const std::string* v = n.attr("id");
      if (!v || *v != *id) return false;
    }
    if (!classes.empty()) {
      const std::string* c = n.attr("class");
      if (!c) return false;
      auto tokens = text::split_whitespace(*c);
      for (const auto& want : classes) {
        bool found = false;
        for (auto t : tokens)
          if (t == want) {
            found = true;
            break;
          }
        if (!found) return false;
      }
    }
    return true;
  }

  std::string to_string() const {
    std::string out = tag.value_or("");
    if (id) out += "#" + *id;
    for (const auto& c : classes) out += "." + c;
    return out;
  }
};

class SelectorList {
 public:
  SelectorList() = default;
  explicit SelectorList(std::vector<CompoundSelector> alternatives)
      : alternatives_(std::move(alternatives)) {}

  // Parses "main, #main, .main"-style lists; throws SelectorSyntaxError.
  static SelectorList parse(std::string_view source) {
    std::vector<CompoundSelector> alts;
    if (text::is_blank(source)) return SelectorList{};
    for (auto part : text::split(source, ',')) alts.push_back(parse_compound(text::trim(part), source));
    return SelectorList(std::move(alts));
  }

  const std::vector<CompoundSelector>& alternatives() const { return alternatives_; }
  bool empty() const { return alternatives_.empty(); }

  bool matches(const DomNode& n) const {
    for (const auto& a : alternatives_)
      if (a.matches(n)) return true;
    return false;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& a : alternatives_) {
      if (!out.empty()) out += ", ";
      out += a.to_string();
    }
    return out;
  }

  SelectorList operator|(const SelectorList& other) const {
    auto alts = alternatives_;
    alts.insert(alts.end(), other.alternatives_.begin(), other.alternatives_.end());
    return SelectorList(std::move(alts));
  }

  bool operator==(const SelectorList&) const = default;

 private:
  static bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_' || u >= 0x80;
  }

  [[noreturn]] static void fail(std::string_view source, std::string_view why) {
    throw SelectorSyntaxError("invalid selector '" + std::string(source) + "': " +
                              std::string(why));
  }

  static std::string read_name(std::string_view s, size_t& i, std::string_view source) {
    size_t start = i;
    while (i < s.size() && is_name_char(s[i])) ++i;
    if (i == start) fail(source, "expected a name");
    return std::string(s.substr(start, i - start));
  }

  static CompoundSelector parse_compound(std::string_view s, std::string_view source) {
    if (s.empty()) fail(source, "empty alternative");
    CompoundSelector c;
    size_t i = 0;
    if (is_name_char(s[0])) c.tag = text::to_ascii_lower(read_name(s, i, source));
    while (i < s.size()) {
      char kind = s[i++];
      if (kind == '#') {
        if (c.id) fail(source, "more than one id in a compound");
        c.id = read_name(s, i, source);
      } else if (kind == '.') {
        c.classes.insert(read_name(s, i, source));
      } else {
        fail(source, std::string("unsupported character '") + kind + "'");
      }
    }
    return c;
  }

  std::vector<CompoundSelector> alternatives_;
};

// All elements matched by any alternative, in document order.
inline std::vector<NodeId> query(const DomDocument& doc, const SelectorList& sel) {
  std::vector<NodeId> out;
  if (sel.empty()) return out;
  for (const auto& n : doc.nodes())
    if (sel.matches(n)) out.push_back(n.id);
  return out;
}

inline std::vector<NodeId> query(const DomDocument& doc, std::string_view selector) {
  return query(doc, SelectorList::parse(selector));
}

inline bool query_any(const DomDocument& doc, const SelectorList& sel) {
  if (sel.empty()) return false;
  for (const auto& n : doc.nodes())
    if (sel.matches(n)) return true;
  return false;
}

}  // namespace nojs
