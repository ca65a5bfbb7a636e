#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "nojs/errors.hpp"
#include "nojs/text.hpp"

namespace nojs {

namespace encoding_detail {

inline bool is_valid_utf8(std::string_view s) {
  size_t i = 0;
  const size_t n = s.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    int len;
    char32_t min;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      min = 0x10000;
    } else {
      return false;
    }
    if (i + len > n) return false;
    char32_t cp = c & (0x7F >> len);
    for (int k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

// windows-1252 bytes 0x80..0x9F; everything else maps to the same code point.
constexpr std::array<char16_t, 32> kWindows1252High = {
    0x20AC, 0x0081, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0x008D, 0x017D, 0x008F,
    0x0090, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x009D, 0x017E, 0x0178};

inline std::string decode_windows_1252(std::string_view s) {
  std::string out;
  out.reserve(s.size() + s.size() / 8);
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (c < 0x80)
      out.push_back(ch);
    else if (c < 0xA0)
      text::append_utf8(out, kWindows1252High[c - 0x80]);
    else
      text::append_utf8(out, c);
  }
  return out;
}

inline std::string decode_utf16(std::string_view s, bool big_endian) {
  std::string out;
  size_t i = 0;
  auto unit = [&](size_t at) -> char16_t {
    auto a = static_cast<unsigned char>(s[at]);
    auto b = static_cast<unsigned char>(s[at + 1]);
    return big_endian ? static_cast<char16_t>((a << 8) | b)
                      : static_cast<char16_t>((b << 8) | a);
  };
  if (s.size() % 2 != 0) throw DecodeError("UTF-16 input has an odd byte count");
  while (i + 1 < s.size()) {
    char32_t u = unit(i);
    i += 2;
    if (u >= 0xD800 && u <= 0xDBFF) {
      if (i + 1 >= s.size()) throw DecodeError("truncated UTF-16 surrogate pair");
      char32_t lo = unit(i);
      if (lo < 0xDC00 || lo > 0xDFFF) throw DecodeError("unpaired UTF-16 surrogate");
      i += 2;
      u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
    } else if (u >= 0xDC00 && u <= 0xDFFF) {
      throw DecodeError("unpaired UTF-16 surrogate");
    }
    text::append_utf8(out, u);
  }
  return out;
}

// Looks for a charset declaration in the first 1024 bytes, the way the
// HTML encoding prescan does, but only for the two meta forms.
inline std::optional<std::string> prescan_charset(std::string_view s) {
  std::string head = text::to_ascii_lower(s.substr(0, 1024));
  size_t pos = 0;
  while ((pos = head.find("<meta", pos)) != std::string::npos) {
    size_t end = head.find('>', pos);
    if (end == std::string::npos) break;
    std::string_view tag(head.data() + pos, end - pos);
    size_t cs = tag.find("charset");
    if (cs != std::string_view::npos) {
      size_t i = cs + 7;
      while (i < tag.size() && (text::is_ascii_whitespace(tag[i]) || tag[i] == '='))
        ++i;
      while (i < tag.size() && (tag[i] == '"' || tag[i] == '\'')) ++i;
      size_t start = i;
      while (i < tag.size() && tag[i] != '"' && tag[i] != '\'' && tag[i] != ';' &&
             !text::is_ascii_whitespace(tag[i]) && tag[i] != '/')
        ++i;
      if (i > start) return std::string(tag.substr(start, i - start));
    }
    pos = end;
  }
  return std::nullopt;
}

}  // namespace encoding_detail

// Converts a raw HTML byte stream to UTF-8.
//
// Valid UTF-8 (with or without BOM) is taken as is; UTF-16 needs a BOM.
// Anything else must declare a single-byte charset we can map
// (latin1 / windows-1252 / ascii labels), otherwise DecodeError.
inline std::string decode_html_bytes(std::string_view bytes) {
  using namespace encoding_detail;
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  else if (bytes.size() >= 2 && bytes.substr(0, 2) == "\xFF\xFE")
    return decode_utf16(bytes.substr(2), false);
  else if (bytes.size() >= 2 && bytes.substr(0, 2) == "\xFE\xFF")
    return decode_utf16(bytes.substr(2), true);

  if (is_valid_utf8(bytes)) return std::string(bytes);

  auto declared = prescan_charset(bytes);
  if (!declared) throw DecodeError("input is not valid UTF-8 and declares no charset");
  static constexpr std::string_view kSingleByte[] = {
      "iso-8859-1", "iso8859-1", "latin1", "l1", "windows-1252", "cp1252",
      "x-cp1252", "us-ascii", "ascii", "iso_8859-1", "cp819", "ibm819"};
  for (auto label : kSingleByte)
    if (*declared == label) return decode_windows_1252(bytes);
  throw DecodeError("input is not valid UTF-8 and declares undecodable charset '" +
                    *declared + "'");
}

}  // namespace nojs
