#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "nojs/errors.hpp"
#include "nojs/features.hpp"

namespace nojs {

enum class Scope { main, whole_page };

inline std::string_view to_string(Scope s) { return s == Scope::main ? "main" : "whole_page"; }

// Element tallies for one feature on one page variant.
struct FeatureCount {
  long long broken_visible = 0;
  long long broken_hidden = 0;
  long long working_visible = 0;
  long long working_hidden = 0;
  Scope scope = Scope::whole_page;

  bool operator==(const FeatureCount&) const = default;

  long long broken(bool visible_only = false) const {
    return visible_only ? broken_visible : broken_visible + broken_hidden;
  }
  long long working(bool visible_only = false) const {
    return visible_only ? working_visible : working_visible + working_hidden;
  }
  long long total(bool visible_only = false) const {
    return broken(visible_only) + working(visible_only);
  }

  void add(const FeatureVerdict& v) {
    if (v.broken) (v.visible ? broken_visible : broken_hidden) += 1;
    else (v.visible ? working_visible : working_hidden) += 1;
  }

  FeatureCount& operator+=(const FeatureCount& o) {
    if (o.scope != scope) throw ContractError("cannot add counts of different scopes");
    broken_visible += o.broken_visible;
    broken_hidden += o.broken_hidden;
    working_visible += o.working_visible;
    working_hidden += o.working_hidden;
    return *this;
  }

  FeatureCount scaled(long long k) const {
    return {broken_visible * k, broken_hidden * k, working_visible * k, working_hidden * k, scope};
  }

  // Componentwise a <= b, the whole-page/main consistency relation.
  bool dominated_by(const FeatureCount& o) const {
    return broken_visible <= o.broken_visible && broken_hidden <= o.broken_hidden &&
           working_visible <= o.working_visible && working_hidden <= o.working_hidden;
  }
};

struct BreakageMetrics {
  long long dbr = 0;
  long long tot_nojs = 0;
  double dbrn = 0.0;

  bool operator==(const BreakageMetrics&) const = default;
};

// Differential breakage: broken elements without scripts minus broken
// elements with scripts.
inline long long dbr(const FeatureCount& nojs, const FeatureCount& plain, bool visible_only = false) {
  if (nojs.scope != plain.scope) throw ContractError("dbr: scope mismatch between variants");
  return nojs.broken(visible_only) - plain.broken(visible_only);
}

// Differential breakage normalised by the total element count without
// scripts; 0 when that total is 0.
inline double dbrn(const FeatureCount& nojs, const FeatureCount& plain, bool visible_only = false) {
  long long tot = nojs.total(visible_only);
  if (tot == 0) return 0.0;
  return static_cast<double>(dbr(nojs, plain, visible_only)) / static_cast<double>(tot);
}

inline BreakageMetrics breakage_metrics(const FeatureCount& nojs, const FeatureCount& plain,
                                        bool visible_only = false) {
  BreakageMetrics m;
  m.dbr = dbr(nojs, plain, visible_only);
  m.tot_nojs = nojs.total(visible_only);
  m.dbrn = dbrn(nojs, plain, visible_only);
  return m;
}

using CountPair = std::pair<FeatureCount, FeatureCount>;  // (nojs, plain)

// Sums the five interactive features; every one must be present.
inline CountPair aggregate_interactive(const std::map<FeatureKind, CountPair>& per_feature) {
  std::optional<CountPair> sum;
  for (FeatureKind k : kInteractiveFeatures) {
    auto it = per_feature.find(k);
    if (it == per_feature.end())
      throw ContractError("aggregate_interactive: missing feature " + std::string(to_string(k)));
    if (!sum) {
      sum = it->second;
      continue;
    }
    sum->first += it->second.first;
    sum->second += it->second.second;
  }
  return *sum;
}

// Members of the "main features" aggregate, in tie-break order.
enum class MainFeature { page_text, stylesheets_loaded, interactive, large_image, loader_overlay };

inline constexpr std::array<MainFeature, 5> kMainFeatures = {
    MainFeature::page_text, MainFeature::stylesheets_loaded, MainFeature::interactive,
    MainFeature::large_image, MainFeature::loader_overlay};

inline std::string_view to_string(MainFeature f) {
  switch (f) {
    case MainFeature::page_text: return "page_text";
    case MainFeature::stylesheets_loaded: return "stylesheets_loaded";
    case MainFeature::interactive: return "interactive";
    case MainFeature::large_image: return "large_image";
    case MainFeature::loader_overlay: return "loader_overlay";
  }
  return "unknown";
}

struct AggregatedMetrics {
  BreakageMetrics metrics;
  MainFeature attained_by = MainFeature::page_text;  // entry with the max dbrn

  bool operator==(const AggregatedMetrics&) const = default;
};

// Maximum of each metric over the main features; the page is as broken as
// its most broken main feature.
inline AggregatedMetrics aggregate_main_features(const std::map<MainFeature, BreakageMetrics>& m) {
  AggregatedMetrics out;
  bool first = true;
  for (MainFeature f : kMainFeatures) {
    auto it = m.find(f);
    if (it == m.end())
      throw ContractError("aggregate_main_features: missing " + std::string(to_string(f)));
    const auto& v = it->second;
    if (first) {
      out.metrics = v;
      out.attained_by = f;
      first = false;
      continue;
    }
    out.metrics.dbr = std::max(out.metrics.dbr, v.dbr);
    if (v.dbrn > out.metrics.dbrn) {
      out.metrics.dbrn = v.dbrn;
      out.metrics.tot_nojs = v.tot_nojs;
      out.attained_by = f;
    }
  }
  return out;
}

enum class PageStatus { feature_absent, working_whole_page, working_main_only, broken_in_main };

inline std::string_view to_string(PageStatus s) {
  switch (s) {
    case PageStatus::feature_absent: return "feature_absent";
    case PageStatus::working_whole_page: return "working_whole_page";
    case PageStatus::working_main_only: return "working_main_only";
    case PageStatus::broken_in_main: return "broken_in_main";
  }
  return "feature_absent";
}

inline std::optional<PageStatus> page_status_from_string(std::string_view s) {
  for (auto st : {PageStatus::feature_absent, PageStatus::working_whole_page,
                  PageStatus::working_main_only, PageStatus::broken_in_main})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

// Where a feature stands on a page: absent, working everywhere, working in
// the main section only, or broken in the main section.
inline PageStatus page_status(const FeatureCount& main_nojs, const FeatureCount& whole_nojs,
                              long long dbr_main, long long dbr_whole) {
  if (!main_nojs.dominated_by(whole_nojs))
    throw ContractError("page_status: main-section counts exceed whole-page counts");
  if (whole_nojs.total() == 0) return PageStatus::feature_absent;
  if (dbr_main > 0) return PageStatus::broken_in_main;
  if (dbr_whole > 0) return PageStatus::working_main_only;
  return PageStatus::working_whole_page;
}

}  // namespace nojs
