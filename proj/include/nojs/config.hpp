#pragma once

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nojs/errors.hpp"
#include "nojs/features.hpp"
#include "nojs/sections.hpp"
#include "nojs/selector.hpp"

namespace nojs {

struct AnalyzerConfig {
  SectionConfig sections;
  DetectorConfig detectors;
  // Wall-clock budget per page pair; pages over budget are skipped.
  std::chrono::milliseconds page_budget{60000};
  // Count only visible elements when computing metrics and statuses.
  bool visible_only = false;
};

namespace config_detail {

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("config: '") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ConfigError(std::string("config: '") + key + "' must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline SelectorList selector_value(const nlohmann::json& j, const std::string& key) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_array()) {
    for (const auto& s : string_list(j, key.c_str())) text += (text.empty() ? "" : ", ") + s;
  } else {
    throw ConfigError("config: sections." + key + " must be a selector string or list");
  }
  if (text::is_blank(text)) return SelectorList{};
  try {
    return SelectorList::parse(text);
  } catch (const SelectorSyntaxError& e) {
    throw ConfigError("config: sections." + key + ": " + e.what());
  }
}

}  // namespace config_detail

// Applies a JSON config object on top of the defaults. Unknown keys are
// rejected so typos do not silently fall back to defaults.
inline AnalyzerConfig parse_config(const nlohmann::json& j) {
  using namespace config_detail;
  AnalyzerConfig cfg;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "sections") {
      if (!value.is_object()) throw ConfigError("config: 'sections' must be an object");
      for (const auto& [name, sel] : value.items()) {
        if (name == "main") cfg.sections.main_selectors = selector_value(sel, name);
        else if (name == "header") cfg.sections.header_selectors = selector_value(sel, name);
        else if (name == "footer") cfg.sections.footer_selectors = selector_value(sel, name);
        else if (name == "aside") cfg.sections.aside_selectors = selector_value(sel, name);
        else if (name == "nav") cfg.sections.nav_selectors = selector_value(sel, name);
        else throw ConfigError("config: unknown section '" + name + "'");
      }
    } else if (key == "lazy_attrs") {
      cfg.detectors.lazy_attrs = string_list(value, "lazy_attrs");
      for (auto& a : cfg.detectors.lazy_attrs) a = text::to_ascii_lower(a);
    } else if (key == "disclosure_classes") {
      cfg.detectors.disclosure_classes = string_list(value, "disclosure_classes");
    } else if (key == "large_image_min_px") {
      if (!value.is_number_integer() || value.get<long long>() < 0)
        throw ConfigError("config: 'large_image_min_px' must be a non-negative integer");
      cfg.detectors.large_image_min_px = value.get<int>();
    } else if (key == "go_to_top_working") {
      if (!value.is_boolean()) throw ConfigError("config: 'go_to_top_working' must be a boolean");
      cfg.detectors.go_to_top_working = value.get<bool>();
    } else if (key == "page_budget_ms") {
      if (!value.is_number_integer() || value.get<long long>() <= 0)
        throw ConfigError("config: 'page_budget_ms' must be a positive integer");
      cfg.page_budget = std::chrono::milliseconds(value.get<long long>());
    } else if (key == "visible_only") {
      if (!value.is_boolean()) throw ConfigError("config: 'visible_only' must be a boolean");
      cfg.visible_only = value.get<bool>();
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline AnalyzerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config: " + path + " is not valid JSON");
  return parse_config(j);
}

}  // namespace nojs
