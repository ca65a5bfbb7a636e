#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "nojs/text.hpp"

namespace nojs {

struct ParsedUrl {
  std::string scheme;  // lowercased
  std::string host;    // lowercased, no port, no brackets
  std::string path;    // everything after the authority
};

// Minimal absolute-URL split: scheme "://" authority rest. Returns nullopt
// for relative URLs and URLs without a host.
inline std::optional<ParsedUrl> parse_absolute_url(std::string_view raw) {
  auto s = text::trim(raw);
  size_t colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  for (size_t i = 0; i < colon; ++i) {
    char c = s[i];
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (i > 0 && ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.'));
    if (!ok) return std::nullopt;
  }
  ParsedUrl u;
  u.scheme = text::to_ascii_lower(s.substr(0, colon));
  auto rest = s.substr(colon + 1);
  if (!rest.starts_with("//")) return std::nullopt;
  rest.remove_prefix(2);
  size_t end = rest.find_first_of("/?#");
  auto authority = rest.substr(0, end);
  u.path = end == std::string_view::npos ? std::string("/") : std::string(rest.substr(end));
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
  std::string_view host;
  if (authority.starts_with("[")) {
    size_t close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(1, close - 1);
  } else {
    host = authority.substr(0, authority.find(':'));
  }
  if (host.empty()) return std::nullopt;
  for (char c : host)
    if (text::is_ascii_whitespace(c) || c == '<' || c == '>' || c == '%' || c == '\\')
      return std::nullopt;
  u.host = text::to_ascii_lower(host);
  while (!u.host.empty() && u.host.back() == '.') u.host.pop_back();
  if (u.host.empty()) return std::nullopt;
  return u;
}

inline bool is_ip_literal(std::string_view host) {
  if (host.find(':') != std::string_view::npos) return true;  // IPv6
  auto parts = text::split(host, '.');
  if (parts.size() != 4) return false;
  for (auto p : parts) {
    auto v = text::parse_non_negative(p);
    if (!v || *v > 255) return false;
  }
  return true;
}

}  // namespace nojs
