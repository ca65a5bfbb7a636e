#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "nojs/encoding.hpp"
#include "nojs/text.hpp"

namespace nojs::entities {

struct NamedReference {
  std::string_view name;
  char32_t code_point;
};

// Frequently seen named references. The full HTML table has ~2200 entries;
// unknown names are left in the text verbatim, which is what a browser does
// for unknown names too.
inline constexpr auto kNamed = std::to_array<NamedReference>({
    {"AElig", 0xC6},   {"Aacute", 0xC1},  {"Agrave", 0xC0},  {"Alpha", 0x391},
    {"Aring", 0xC5},   {"Atilde", 0xC3},  {"Auml", 0xC4},    {"Beta", 0x392},
    {"Ccedil", 0xC7},  {"Delta", 0x394},  {"Eacute", 0xC9},  {"Egrave", 0xC8},
    {"Euml", 0xCB},    {"Gamma", 0x393},  {"Iacute", 0xCD},  {"Lambda", 0x39B},
    {"Ntilde", 0xD1},  {"Oacute", 0xD3},  {"Omega", 0x3A9},  {"Ouml", 0xD6},
    {"Pi", 0x3A0},     {"Sigma", 0x3A3},  {"Uacute", 0xDA},  {"Uuml", 0xDC},
    {"aacute", 0xE1},  {"acirc", 0xE2},   {"acute", 0xB4},   {"aelig", 0xE6},
    {"agrave", 0xE0},  {"alpha", 0x3B1},  {"amp", 0x26},     {"apos", 0x27},
    {"aring", 0xE5},   {"asymp", 0x2248}, {"atilde", 0xE3},  {"auml", 0xE4},
    {"bdquo", 0x201E}, {"beta", 0x3B2},   {"brvbar", 0xA6},  {"bull", 0x2022},
    {"ccedil", 0xE7},  {"cedil", 0xB8},   {"cent", 0xA2},    {"check", 0x2713},
    {"copy", 0xA9},    {"curren", 0xA4},  {"dagger", 0x2020}, {"darr", 0x2193},
    {"deg", 0xB0},     {"delta", 0x3B4},  {"divide", 0xF7},  {"eacute", 0xE9},
    {"ecirc", 0xEA},   {"egrave", 0xE8},  {"emsp", 0x2003},  {"ensp", 0x2002},
    {"epsilon", 0x3B5}, {"equiv", 0x2261}, {"euml", 0xEB},   {"euro", 0x20AC},
    {"frac12", 0xBD},  {"frac14", 0xBC},  {"frac34", 0xBE},  {"gamma", 0x3B3},
    {"ge", 0x2265},    {"gt", 0x3E},      {"hArr", 0x21D4},  {"harr", 0x2194},
    {"hearts", 0x2665}, {"hellip", 0x2026}, {"iacute", 0xED}, {"icirc", 0xEE},
    {"iexcl", 0xA1},   {"igrave", 0xEC},  {"infin", 0x221E}, {"iquest", 0xBF},
    {"iuml", 0xEF},    {"lambda", 0x3BB}, {"laquo", 0xAB},   {"larr", 0x2190},
    {"ldquo", 0x201C}, {"le", 0x2264},    {"lsaquo", 0x2039}, {"lsquo", 0x2018},
    {"lt", 0x3C},      {"macr", 0xAF},    {"mdash", 0x2014}, {"micro", 0xB5},
    {"middot", 0xB7},  {"minus", 0x2212}, {"mu", 0x3BC},     {"nbsp", 0xA0},
    {"ndash", 0x2013}, {"ne", 0x2260},    {"not", 0xAC},     {"ntilde", 0xF1},
    {"oacute", 0xF3},  {"ocirc", 0xF4},   {"oelig", 0x153},  {"ograve", 0xF2},
    {"omega", 0x3C9},  {"ordf", 0xAA},    {"ordm", 0xBA},    {"oslash", 0xF8},
    {"otilde", 0xF5},  {"ouml", 0xF6},    {"para", 0xB6},    {"permil", 0x2030},
    {"phi", 0x3C6},    {"pi", 0x3C0},     {"plusmn", 0xB1},  {"pound", 0xA3},
    {"prime", 0x2032}, {"quot", 0x22},    {"raquo", 0xBB},   {"rarr", 0x2192},
    {"rdquo", 0x201D}, {"reg", 0xAE},     {"rsaquo", 0x203A}, {"rsquo", 0x2019},
    {"sbquo", 0x201A}, {"scaron", 0x161}, {"sect", 0xA7},    {"shy", 0xAD},
    {"sigma", 0x3C3},  {"sup1", 0xB9},    {"sup2", 0xB2},    {"sup3", 0xB3},
    {"szlig", 0xDF},   {"theta", 0x3B8},  {"thinsp", 0x2009}, {"times", 0xD7},
    {"trade", 0x2122}, {"uacute", 0xFA},  {"uarr", 0x2191},  {"ucirc", 0xFB},
    {"ugrave", 0xF9},  {"uml", 0xA8},     {"uuml", 0xFC},    {"yacute", 0xFD},
    {"yen", 0xA5},     {"yuml", 0xFF},    {"zwj", 0x200D},   {"zwnj", 0x200C},
});

// Legacy names a browser also recognises without the trailing semicolon.
inline constexpr std::string_view kLegacy[] = {"amp", "lt", "gt", "quot", "nbsp",
                                               "copy", "reg"};

inline const NamedReference* find_named(std::string_view name) {
  static const auto sorted = [] {
    auto v = kNamed;
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    return v;
  }();
  auto it = std::lower_bound(sorted.begin(), sorted.end(), name,
                             [](const NamedReference& r, std::string_view n) {
                               return r.name < n;
                             });
  if (it != sorted.end() && it->name == name) return &*it;
  return nullptr;
}

inline char32_t sanitize_numeric(unsigned long cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0xFFFD;
  if (cp >= 0x80 && cp <= 0x9F)
    return encoding_detail::kWindows1252High[cp - 0x80];
  return static_cast<char32_t>(cp);
}

// Decodes character references in `in`. In attribute values a legacy
// reference without `;` followed by an alphanumeric or `=` stays literal.
inline std::string decode(std::string_view in, bool in_attribute) {
  if (in.find('&') == std::string_view::npos) return std::string(in);
  std::string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (c != '&') {
      out.push_back(c);
      ++i;
      continue;
    }
    size_t j = i + 1;
    if (j < in.size() && in[j] == '#') {
      ++j;
      bool hex = j < in.size() && (in[j] == 'x' || in[j] == 'X');
      if (hex) ++j;
      size_t start = j;
      unsigned long cp = 0;
      while (j < in.size() && (hex ? text::hex_value(in[j]) >= 0
                                   : (in[j] >= '0' && in[j] <= '9'))) {
        if (cp < 0x110000) cp = cp * (hex ? 16 : 10) + text::hex_value(in[j]);
        ++j;
      }
      if (j == start) {
        out.push_back('&');
        ++i;
        continue;
      }
      if (j < in.size() && in[j] == ';') ++j;
      text::append_utf8(out, sanitize_numeric(cp));
      i = j;
      continue;
    }
    size_t start = j;
    while (j < in.size() && (std::isalnum(static_cast<unsigned char>(in[j])))) ++j;
    std::string_view name = in.substr(start, j - start);
    bool semicolon = j < in.size() && in[j] == ';';
    const NamedReference* ref = name.empty() ? nullptr : find_named(name);
    if (ref && semicolon) {
      text::append_utf8(out, ref->code_point);
      i = j + 1;
      continue;
    }
    // Longest legacy prefix without semicolon, e.g. "&ampx" or "&copy 2020".
    bool done = false;
    for (auto legacy : kLegacy) {
      if (name.substr(0, legacy.size()) != legacy) continue;
      size_t after = start + legacy.size();
      if (in_attribute && after < in.size() &&
          (std::isalnum(static_cast<unsigned char>(in[after])) || in[after] == '='))
        break;
      text::append_utf8(out, find_named(legacy)->code_point);
      i = after;
      done = true;
      break;
    }
    if (!done) {
      out.push_back('&');
      ++i;
    }
  }
  return out;
}

}  // namespace nojs::entities
