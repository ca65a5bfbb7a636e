#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nojs/text.hpp"

namespace nojs {

// Index of a node inside its DomDocument. Ids follow document (pre-)order,
// so comparing two ids compares document positions.
enum class NodeId : std::uint32_t {};

constexpr std::uint32_t index_of(NodeId id) { return static_cast<std::uint32_t>(id); }

enum class NodeKind { document, element, text, comment };

struct Attribute {
  std::string name;
  std::string value;

  bool operator==(const Attribute&) const = default;
};

struct DomNode {
  NodeKind kind = NodeKind::element;
  std::string tag;  // ASCII-lowercased; elements only
  std::vector<Attribute> attributes;
  std::string text;  // text and comment nodes
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  NodeId id{};

  bool is_element() const { return kind == NodeKind::element; }
  bool is_element(std::string_view t) const { return kind == NodeKind::element && tag == t; }
  bool is_text() const { return kind == NodeKind::text; }

  const std::string* attr(std::string_view name) const {
    for (const auto& a : attributes)
      if (a.name == name) return &a.value;
    return nullptr;
  }
  bool has_attr(std::string_view name) const { return attr(name) != nullptr; }
  std::string_view attr_or(std::string_view name, std::string_view fallback = {}) const {
    const std::string* v = attr(name);
    return v ? std::string_view(*v) : fallback;
  }
  bool has_class(std::string_view token) const {
    const std::string* c = attr("class");
    return c && text::has_token(*c, token);
  }
};

// Immutable parsed document. Construct through parse_document().
class DomDocument {
 public:
  DomDocument() = default;

  const DomNode& root() const { return nodes_.front(); }
  const DomNode& node(NodeId id) const { return nodes_[index_of(id)]; }
  const DomNode& operator[](NodeId id) const { return node(id); }
  std::span<const DomNode> nodes() const { return nodes_; }
  size_t size() const { return nodes_.size(); }

  std::optional<NodeId> html() const { return html_; }
  std::optional<NodeId> head() const { return head_; }
  std::optional<NodeId> body() const { return body_; }

  // First element in document order carrying this id.
  std::optional<NodeId> element_by_id(std::string_view id) const {
    auto it = ids_.find(std::string(id));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  // Last node of the subtree rooted at `id` (itself when it is a leaf).
  NodeId subtree_end(NodeId id) const { return subtree_end_[index_of(id)]; }

  bool is_ancestor(NodeId ancestor, NodeId descendant) const {
    return index_of(ancestor) < index_of(descendant) &&
           index_of(descendant) <= index_of(subtree_end(ancestor));
  }

  // Nearest ancestor element (excluding the node itself) with this tag.
  std::optional<NodeId> closest_ancestor(NodeId id, std::string_view tag) const {
    auto p = node(id).parent;
    while (p) {
      if (node(*p).is_element(tag)) return p;
      p = node(*p).parent;
    }
    return std::nullopt;
  }

  std::optional<NodeId> parent_element(NodeId id) const {
    auto p = node(id).parent;
    if (p && node(*p).is_element()) return p;
    return std::nullopt;
  }

  // Root-to-node child index path, e.g. "0/1/3". The document root is "".
  std::string node_path(NodeId id) const {
    std::vector<size_t> steps;
    NodeId cur = id;
    while (auto p = node(cur).parent) {
      const auto& siblings = node(*p).children;
      size_t i = 0;
      while (siblings[i] != cur) ++i;
      steps.push_back(i);
      cur = *p;
    }
    std::string out;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      if (!out.empty()) out.push_back('/');
      out += std::to_string(*it);
    }
    return out;
  }

  std::optional<NodeId> resolve_path(std::string_view path) const {
    NodeId cur = root().id;
    if (path.empty()) return cur;
    for (auto step : text::split(path, '/')) {
      auto idx = text::parse_non_negative(step);
      const auto& kids = node(cur).children;
      if (!idx || static_cast<size_t>(*idx) >= kids.size()) return std::nullopt;
      cur = kids[static_cast<size_t>(*idx)];
    }
    return cur;
  }

 private:
  friend class DocumentBuilder;

  std::vector<DomNode> nodes_;
  std::vector<NodeId> subtree_end_;
  std::unordered_map<std::string, NodeId> ids_;
  std::optional<NodeId> html_, head_, body_;
};

// Mutable tree used while parsing; finalize() renumbers nodes in document
// order and freezes the result into a DomDocument.
class DocumentBuilder {
 public:
  using Index = std::uint32_t;

  DocumentBuilder() {
    DomNode doc;
    doc.kind = NodeKind::document;
    nodes_.push_back(std::move(doc));
  }

  static constexpr Index kRoot = 0;

  DomNode& at(Index i) { return nodes_[i]; }
  const DomNode& at(Index i) const { return nodes_[i]; }
  Index parent_of(Index i) const { return parents_[i]; }

  Index create(DomNode n) {
    nodes_.push_back(std::move(n));
    parents_.resize(nodes_.size(), kNone);
    kids_.resize(nodes_.size());
    return static_cast<Index>(nodes_.size() - 1);
  }

  void append(Index parent, Index child) {
    kids_[parent].push_back(child);
    parents_[child] = parent;
  }

  void insert_before(Index parent, Index child, Index reference) {
    auto& k = kids_[parent];
    auto it = std::find(k.begin(), k.end(), reference);
    k.insert(it, child);
    parents_[child] = parent;
  }

  // Appends text, merging with a preceding text sibling.
  void append_text(Index parent, std::string_view s) {
    if (s.empty()) return;
    auto& k = kids_[parent];
    if (!k.empty() && nodes_[k.back()].kind == NodeKind::text) {
      nodes_[k.back()].text.append(s);
      return;
    }
    DomNode t;
    t.kind = NodeKind::text;
    t.text = std::string(s);
    append(parent, create(std::move(t)));
  }

  void text_before(Index parent, std::string_view s, Index reference) {
    auto& k = kids_[parent];
    auto it = std::find(k.begin(), k.end(), reference);
    if (it != k.begin() && nodes_[*(it - 1)].kind == NodeKind::text) {
      nodes_[*(it - 1)].text.append(s);
      return;
    }
    DomNode t;
    t.kind = NodeKind::text;
    t.text = std::string(s);
    insert_before(parent, create(std::move(t)), reference);
  }

  const std::vector<Index>& children(Index i) const { return kids_[i]; }

  DomDocument finalize() && {
    DomDocument doc;
    doc.nodes_.reserve(nodes_.size());
    std::vector<Index> order;
    order.reserve(nodes_.size());
    // Iterative pre-order walk.
    std::vector<std::pair<Index, size_t>> stack{{kRoot, 0}};
    order.push_back(kRoot);
    std::vector<std::uint32_t> new_id(nodes_.size(), 0);
    new_id[kRoot] = 0;
    while (!stack.empty()) {
      auto& [idx, next] = stack.back();
      if (next < kids_[idx].size()) {
        Index child = kids_[idx][next++];
        new_id[child] = static_cast<std::uint32_t>(order.size());
        order.push_back(child);
        stack.emplace_back(child, 0);
      } else {
        stack.pop_back();
      }
    }
    for (Index old : order) {
      DomNode n = std::move(nodes_[old]);
      n.id = NodeId{new_id[old]};
      n.parent = old == kRoot ? std::nullopt
                              : std::optional<NodeId>(NodeId{new_id[parents_[old]]});
      n.children.clear();
      n.children.reserve(kids_[old].size());
      for (Index c : kids_[old]) n.children.push_back(NodeId{new_id[c]});
      doc.nodes_.push_back(std::move(n));
    }
    doc.subtree_end_.resize(doc.nodes_.size());
    for (size_t i = doc.nodes_.size(); i-- > 0;) {
      const auto& n = doc.nodes_[i];
      doc.subtree_end_[i] =
          n.children.empty() ? n.id : doc.subtree_end_[index_of(n.children.back())];
    }
    for (const auto& n : doc.nodes_) {
      if (!n.is_element()) continue;
      if (const std::string* id = n.attr("id"); id && !id->empty())
        doc.ids_.try_emplace(*id, n.id);
      if (n.parent && doc.nodes_[index_of(*n.parent)].kind == NodeKind::document &&
          n.tag == "html" && !doc.html_)
        doc.html_ = n.id;
    }
    if (doc.html_) {
      for (NodeId c : doc.node(*doc.html_).children) {
        const auto& n = doc.node(c);
        if (n.is_element("head") && !doc.head_) doc.head_ = c;
        if (n.is_element("body") && !doc.body_) doc.body_ = c;
      }
    }
    return doc;
  }

 private:
  static constexpr Index kNone = static_cast<Index>(-1);
  std::vector<DomNode> nodes_;
  std::vector<Index> parents_{kNone};
  std::vector<std::vector<Index>> kids_{1};
};

namespace dom_detail {

inline bool is_void_element(std::string_view tag) {
  static constexpr std::string_view kVoid[] = {
      "area", "base", "br", "col", "embed", "hr", "img", "input", "keygen",
      "link", "meta", "param", "source", "track", "wbr", "basefont", "bgsound", "frame"};
  for (auto v : kVoid)
    if (v == tag) return true;
  return false;
}

inline bool is_raw_text_parent(std::string_view tag) {
  return tag == "script" || tag == "style" || tag == "xmp" || tag == "iframe" ||
         tag == "noembed" || tag == "noframes" || tag == "plaintext";
}

inline void escape(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += attribute ? "<" : "&lt;"; break;
      case '>': out += attribute ? ">" : "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      default: out.push_back(c);
    }
  }
}

inline void serialize_into(const DomDocument& doc, const DomNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::document:
      for (NodeId c : n.children) serialize_into(doc, doc.node(c), out);
      return;
    case NodeKind::comment:
      out += "<!--";
      out += n.text;
      out += "-->";
      return;
    case NodeKind::text: {
      auto parent = n.parent ? &doc.node(*n.parent) : nullptr;
      if (parent && parent->is_element() && is_raw_text_parent(parent->tag))
        out += n.text;
      else
        escape(out, n.text, false);
      return;
    }
    case NodeKind::element:
      out.push_back('<');
      out += n.tag;
      for (const auto& a : n.attributes) {
        out.push_back(' ');
        out += a.name;
        out += "=\"";
        escape(out, a.value, true);
        out.push_back('"');
      }
      out.push_back('>');
      if (is_void_element(n.tag)) return;
      for (NodeId c : n.children) serialize_into(doc, doc.node(c), out);
      out += "</";
      out += n.tag;
      out.push_back('>');
      return;
  }
}

}  // namespace dom_detail

// HTML serialization of the whole document (no doctype).
inline std::string serialize(const DomDocument& doc) {
  std::string out;
  dom_detail::serialize_into(doc, doc.root(), out);
  return out;
}

inline std::string serialize(const DomDocument& doc, NodeId id) {
  std::string out;
  dom_detail::serialize_into(doc, doc.node(id), out);
  return out;
}

// Concatenated descendant text in document order, skipping script and
// style subtrees.
inline std::string text_content(const DomDocument& doc, NodeId id) {
  const DomNode& n = doc.node(id);
  if (n.is_text()) return n.text;
  std::string out;
  const auto end = index_of(doc.subtree_end(id));
  for (std::uint32_t i = index_of(id) + 1; i <= end;) {
    const DomNode& d = doc.node(NodeId{i});
    if (d.is_element("script") || d.is_element("style")) {
      i = index_of(doc.subtree_end(d.id)) + 1;
      continue;
    }
    if (d.is_text()) out += d.text;
    ++i;
  }
  return out;
}

}  // namespace nojs
