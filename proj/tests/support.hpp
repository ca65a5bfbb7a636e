#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nojs/nojs.hpp"

namespace nojs::testing {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(NOJS_FIXTURE_DIR) / rel; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// Canonical tree dump, same layout as tests/oracles/html5lib_trees.py.
inline void dump_children(const DomDocument& d, const DomNode& n, int depth, std::vector<std::string>& out) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  for (NodeId c : n.children) {
    const DomNode& k = d.node(c);
    if (k.kind == NodeKind::element) {
      out.push_back(pad + "<" + k.tag + ">");
      auto attrs = k.attributes;
      std::sort(attrs.begin(), attrs.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
      for (const auto& a : attrs) out.push_back(pad + "  " + a.name + "=\"" + a.value + "\"");
      dump_children(d, k, depth + 1, out);
    } else if (k.kind == NodeKind::text) {
      out.push_back(pad + "\"" + k.text + "\"");
    } else if (k.kind == NodeKind::comment) {
      out.push_back(pad + "<!-- " + k.text + " -->");
    }
  }
}

inline std::string tree_dump(const DomDocument& d) {
  std::vector<std::string> lines;
  dump_children(d, d.root(), 0, lines);
  // The reference dump starts at <html>; drop document-level comments before it.
  auto first = std::find_if(lines.begin(), lines.end(), [](const std::string& l) { return !l.starts_with("<!--"); });
  std::string out;
  for (auto it = first; it != lines.end(); ++it) {
    if (it != first) out += '\n';
    out += *it;
  }
  return out;
}

inline NodeId first(const DomDocument& d, std::string_view tag) {
  for (const auto& n : d.nodes())
    if (n.kind == NodeKind::element && n.tag == tag) return n.id;
  throw std::runtime_error("no <" + std::string(tag) + "> in document");
}

inline std::vector<NodeId> all(const DomDocument& d, std::string_view tag) {
  std::vector<NodeId> out;
  for (const auto& n : d.nodes())
    if (n.kind == NodeKind::element && n.tag == tag) out.push_back(n.id);
  return out;
}

inline std::vector<FeatureVerdict> verdicts(const std::string& html, FeatureKind kind, const AnalyzerConfig& cfg = {}) {
  auto doc = parse_document(html);
  std::vector<FeatureVerdict> out;
  for (auto& v : analyze_page(doc, cfg).verdicts)
    if (v.kind == kind) out.push_back(std::move(v));
  return out;
}

inline std::vector<FeatureVerdict> verdicts(const DomDocument& doc, FeatureKind kind, const AnalyzerConfig& cfg = {}) {
  std::vector<FeatureVerdict> out;
  for (auto& v : analyze_page(doc, cfg).verdicts)
    if (v.kind == kind) out.push_back(std::move(v));
  return out;
}

}  // namespace nojs::testing
