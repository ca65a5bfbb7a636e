#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nojs/errors.hpp"
#include "nojs/text.hpp"

namespace nojs {

// Public suffix table in the standard list format: one rule per line,
// `//` comments, `*.` wildcards and `!` exceptions.
class SuffixTable {
 public:
  SuffixTable() = default;

  static SuffixTable parse(std::istream& in) {
    SuffixTable t;
    std::string line;
    while (std::getline(in, line)) t.add_line(line);
    return t;
  }

  static SuffixTable parse(std::string_view content) {
    SuffixTable t;
    for (auto line : text::split(content, '\n')) t.add_line(line);
    return t;
  }

  void add_rule(std::string_view rule) {
    rule = text::trim(rule);
    if (rule.empty()) return;
    std::string r = text::to_ascii_lower(rule);
    if (r.front() == '!') exceptions_.insert(r.substr(1));
    else if (r.starts_with("*.")) wildcards_.insert(r.substr(2));
    else rules_.insert(r);
    ++size_;
  }

  size_t size() const { return size_; }

  // Number of labels of the public suffix of `host` (lowercase, no
  // trailing dot). 0 means no rule matched.
  size_t suffix_labels(std::string_view host) const {
    auto labels = text::split(host, '.');
    const size_t n = labels.size();
    size_t best = 0;
    // Walk suffixes from the longest; the first hit of each kind is the
    // longest one.
    for (size_t start = 0; start < n; ++start) {
      std::string_view suffix = host.substr(offset(labels, start));
      size_t len = n - start;
      if (exceptions_.count(std::string(suffix))) return len - 1;
      if (best == 0 && rules_.count(std::string(suffix))) best = len;
      // "*.foo" matches any single label followed by foo.
      if (best == 0 && start + 1 < n) {
        std::string_view parent = host.substr(offset(labels, start + 1));
        if (wildcards_.count(std::string(parent))) best = len;
      }
    }
    return best;
  }

  // Registrable domain (eTLD+1). Single-label hosts the table does not
  // know are their own base domain; multi-label hosts fall back to the
  // implicit "*" rule.
  std::string base_domain(std::string_view host_in) const {
    std::string host = text::to_ascii_lower(host_in);
    while (!host.empty() && host.back() == '.') host.pop_back();
    if (host.empty()) throw SuffixOnlyError("empty host");
    auto labels = text::split(host, '.');
    size_t n = labels.size();
    size_t suffix = suffix_labels(host);
    if (suffix == 0) {
      if (n == 1) return host;
      suffix = 1;
    }
    if (suffix >= n) throw SuffixOnlyError("host '" + host + "' is a public suffix");
    return std::string(std::string_view(host).substr(offset(labels, n - suffix - 1)));
  }

 private:
  static size_t offset(const std::vector<std::string_view>& labels, size_t index) {
    return static_cast<size_t>(labels[index].data() - labels[0].data());
  }

  void add_line(std::string_view line) {
    line = text::trim(line);
    if (line.empty() || line.starts_with("//")) return;
    size_t end = 0;
    while (end < line.size() && !text::is_ascii_whitespace(line[end])) ++end;
    add_rule(line.substr(0, end));
  }

  std::unordered_set<std::string> rules_, wildcards_, exceptions_;
  size_t size_ = 0;
};

}  // namespace nojs
