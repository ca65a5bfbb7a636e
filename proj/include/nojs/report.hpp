#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nojs/config.hpp"
#include "nojs/dom.hpp"
#include "nojs/errors.hpp"
#include "nojs/features.hpp"
#include "nojs/metrics.hpp"
#include "nojs/sections.hpp"

namespace nojs {

enum class Variant { plain, nojs };

inline std::string_view to_string(Variant v) { return v == Variant::plain ? "plain" : "nojs"; }

struct ScopedCounts {
  FeatureCount main{0, 0, 0, 0, Scope::main};
  FeatureCount whole{0, 0, 0, 0, Scope::whole_page};

  bool operator==(const ScopedCounts&) const = default;
};

struct PageFlags {
  bool has_body_text = false;
  bool has_stylesheets = false;

  bool operator==(const PageFlags&) const = default;
};

struct FeatureReport {
  std::string page_url;
  Variant variant = Variant::nojs;
  std::map<FeatureKind, ScopedCounts> features;
  PageFlags page_flags;
  std::optional<long long> load_ms;
  std::vector<std::string> diagnostics;

  bool operator==(const FeatureReport&) const = default;

  const ScopedCounts& counts(FeatureKind k) const { return features.at(k); }
};

struct PageAnalysis {
  std::vector<FeatureVerdict> verdicts;
  std::vector<std::string> diagnostics;
};

// Runs every detector; a detector that throws is reported as a diagnostic
// and contributes no verdicts.
inline PageAnalysis analyze_page(const DomDocument& doc, const AnalyzerConfig& cfg = {}) {
  PageAnalysis out;
  SectionMap sections = classify_sections(doc, cfg.sections);
  PageContext ctx(doc, sections, cfg.detectors);
  using Detector = std::function<std::vector<FeatureVerdict>(const PageContext&)>;
  const std::vector<std::pair<FeatureKind, Detector>> detectors = {
      {FeatureKind::large_image, detect_images},
      {FeatureKind::form, detect_forms},
      {FeatureKind::lone_control, detect_lone_controls},
      {FeatureKind::empty_anchor_button, detect_empty_anchor_buttons},
      {FeatureKind::mislinked_fragment_anchor, detect_mislinked_fragment_anchors},
      {FeatureKind::disclosure_button, detect_disclosure_buttons},
      {FeatureKind::protected_email, detect_protected_emails},
      {FeatureKind::loader_overlay, detect_loader_overlays},
      {FeatureKind::page_text, [](const PageContext& c) { return std::vector{check_page_text(c)}; }},
      {FeatureKind::stylesheets_loaded,
       [](const PageContext& c) { return std::vector{check_stylesheets(c)}; }},
  };
  for (const auto& [kind, run] : detectors) {
    try {
      auto v = run(ctx);
      out.verdicts.insert(out.verdicts.end(), v.begin(), v.end());
    } catch (const std::exception& e) {
      out.diagnostics.push_back(std::string(to_string(kind)) + ": detector failed: " + e.what());
    }
  }
  return out;
}

inline FeatureReport tally_report(const std::vector<FeatureVerdict>& verdicts, Variant variant,
                                  std::string page_url = {}) {
  FeatureReport r;
  r.page_url = std::move(page_url);
  r.variant = variant;
  for (FeatureKind k : kAllFeatures) r.features[k] = ScopedCounts{};
  for (const auto& v : verdicts) {
    auto& c = r.features[v.kind];
    c.whole.add(v);
    if (v.in_main) c.main.add(v);
    if (v.kind == FeatureKind::page_text) r.page_flags.has_body_text = !v.broken;
    if (v.kind == FeatureKind::stylesheets_loaded) r.page_flags.has_stylesheets = !v.broken;
  }
  return r;
}

inline FeatureReport build_report(const DomDocument& doc, Variant variant, const AnalyzerConfig& cfg = {},
                                  std::string page_url = {}) {
  auto analysis = analyze_page(doc, cfg);
  FeatureReport r = tally_report(analysis.verdicts, variant, std::move(page_url));
  r.diagnostics = std::move(analysis.diagnostics);
  return r;
}

// --- report JSON ---

inline nlohmann::json to_json(const FeatureCount& c) {
  return {{"broken_visible", c.broken_visible},
          {"broken_hidden", c.broken_hidden},
          {"working_visible", c.working_visible},
          {"working_hidden", c.working_hidden}};
}

inline nlohmann::json to_json(const FeatureReport& r) {
  nlohmann::json features = nlohmann::json::object();
  for (const auto& [kind, c] : r.features)
    features[std::string(to_string(kind))] = {{"main", to_json(c.main)}, {"whole_page", to_json(c.whole)}};
  nlohmann::json j = {
      {"page_url", r.page_url},
      {"variant", to_string(r.variant)},
      {"features", features},
      {"page_flags",
       {{"has_body_text", r.page_flags.has_body_text}, {"has_stylesheets", r.page_flags.has_stylesheets}}},
      {"timings", r.load_ms ? nlohmann::json{{"load_ms", *r.load_ms}} : nlohmann::json(nullptr)},
      {"diagnostics", r.diagnostics},
  };
  return j;
}

namespace report_detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("report: missing field '") + key + "'");
  return j.at(key);
}

inline FeatureCount count_from_json(const nlohmann::json& j, Scope scope) {
  FeatureCount c;
  c.scope = scope;
  auto get = [&](const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw SchemaError(std::string("report: '") + key + "' must be a non-negative integer");
    return v.get<long long>();
  };
  c.broken_visible = get("broken_visible");
  c.broken_hidden = get("broken_hidden");
  c.working_visible = get("working_visible");
  c.working_hidden = get("working_hidden");
  return c;
}

inline bool bool_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_boolean()) throw SchemaError(std::string("report: '") + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace report_detail

inline FeatureReport report_from_json(const nlohmann::json& j) {
  using namespace report_detail;
  FeatureReport r;
  const auto& url = field(j, "page_url");
  if (!url.is_string()) throw SchemaError("report: 'page_url' must be a string");
  r.page_url = url.get<std::string>();
  const auto& variant = field(j, "variant");
  if (variant == "plain") r.variant = Variant::plain;
  else if (variant == "nojs") r.variant = Variant::nojs;
  else throw SchemaError("report: 'variant' must be \"plain\" or \"nojs\"");

  const auto& features = field(j, "features");
  if (!features.is_object()) throw SchemaError("report: 'features' must be an object");
  for (const auto& [name, value] : features.items()) {
    auto kind = feature_from_string(name);
    if (!kind) throw SchemaError("report: unknown feature '" + name + "'");
    r.features[*kind] = {count_from_json(field(value, "main"), Scope::main),
                         count_from_json(field(value, "whole_page"), Scope::whole_page)};
  }
  for (FeatureKind k : kAllFeatures)
    if (!r.features.count(k)) throw SchemaError("report: missing feature '" + std::string(to_string(k)) + "'");

  const auto& flags = field(j, "page_flags");
  r.page_flags.has_body_text = bool_field(flags, "has_body_text");
  r.page_flags.has_stylesheets = bool_field(flags, "has_stylesheets");

  const auto& timings = field(j, "timings");
  if (!timings.is_null()) {
    const auto& ms = field(timings, "load_ms");
    if (!ms.is_number_integer()) throw SchemaError("report: 'load_ms' must be an integer");
    r.load_ms = ms.get<long long>();
  }
  const auto& diags = field(j, "diagnostics");
  if (!diags.is_array()) throw SchemaError("report: 'diagnostics' must be an array");
  for (const auto& d : diags) {
    if (!d.is_string()) throw SchemaError("report: diagnostics must be strings");
    r.diagnostics.push_back(d.get<std::string>());
  }
  return r;
}

// --- pair comparison ---

struct FeatureResult {
  BreakageMetrics main;
  BreakageMetrics whole;
  BreakageMetrics main_visible;
  PageStatus status = PageStatus::feature_absent;

  bool operator==(const FeatureResult&) const = default;
};

struct MainFeaturesResult {
  AggregatedMetrics main;
  AggregatedMetrics whole;
  PageStatus status = PageStatus::feature_absent;

  bool operator==(const MainFeaturesResult&) const = default;
};

struct PairResult {
  std::string page_url;
  std::map<FeatureKind, FeatureResult> features;
  FeatureResult interactive;
  MainFeaturesResult main_features;

  bool operator==(const PairResult&) const = default;

  PageStatus main_features_status() const { return main_features.status; }
};

namespace report_detail {

inline FeatureResult feature_result(const ScopedCounts& nojs, const ScopedCounts& plain, bool visible_only) {
  FeatureResult r;
  r.main = breakage_metrics(nojs.main, plain.main, visible_only);
  r.whole = breakage_metrics(nojs.whole, plain.whole, visible_only);
  r.main_visible = breakage_metrics(nojs.main, plain.main, true);
  FeatureCount main_nojs = nojs.main, whole_nojs = nojs.whole;
  if (visible_only) {
    main_nojs.broken_hidden = main_nojs.working_hidden = 0;
    whole_nojs.broken_hidden = whole_nojs.working_hidden = 0;
  }
  r.status = page_status(main_nojs, whole_nojs, r.main.dbr, r.whole.dbr);
  return r;
}

}  // namespace report_detail

// Metrics of one page pair. `visible_only` restricts counts to visible
// elements for the headline metrics and statuses.
inline PairResult compare_pair(const FeatureReport& plain, const FeatureReport& nojs, bool visible_only = false) {
  using report_detail::feature_result;
  if (plain.page_url != nojs.page_url)
    throw PairingError("page URL mismatch: '" + plain.page_url + "' vs '" + nojs.page_url + "'",
                       {plain.page_url, nojs.page_url});
  if (plain.variant != Variant::plain || nojs.variant != Variant::nojs)
    throw PairingError("compare_pair expects a plain report and a nojs report");

  PairResult r;
  r.page_url = plain.page_url;
  for (FeatureKind k : kAllFeatures) r.features[k] = feature_result(nojs.counts(k), plain.counts(k), visible_only);

  std::map<FeatureKind, CountPair> main_pairs, whole_pairs;
  for (FeatureKind k : kInteractiveFeatures) {
    main_pairs[k] = {nojs.counts(k).main, plain.counts(k).main};
    whole_pairs[k] = {nojs.counts(k).whole, plain.counts(k).whole};
  }
  auto [main_nojs, main_plain] = aggregate_interactive(main_pairs);
  auto [whole_nojs, whole_plain] = aggregate_interactive(whole_pairs);
  ScopedCounts inter_nojs{main_nojs, whole_nojs}, inter_plain{main_plain, whole_plain};
  r.interactive = feature_result(inter_nojs, inter_plain, visible_only);

  // Main features: page text, stylesheets, interactive, large images, overlay.
  std::map<MainFeature, BreakageMetrics> main_m, whole_m;
  ScopedCounts member_sum;
  auto add_member = [&](MainFeature f, const FeatureResult& fr, const ScopedCounts& counts) {
    main_m[f] = fr.main;
    whole_m[f] = fr.whole;
    FeatureCount m = counts.main, w = counts.whole;
    if (visible_only) m.broken_hidden = m.working_hidden = w.broken_hidden = w.working_hidden = 0;
    member_sum.main += m;
    member_sum.whole += w;
  };
  add_member(MainFeature::page_text, r.features[FeatureKind::page_text], nojs.counts(FeatureKind::page_text));
  add_member(MainFeature::stylesheets_loaded, r.features[FeatureKind::stylesheets_loaded],
             nojs.counts(FeatureKind::stylesheets_loaded));
  add_member(MainFeature::interactive, r.interactive, inter_nojs);
  add_member(MainFeature::large_image, r.features[FeatureKind::large_image], nojs.counts(FeatureKind::large_image));
  add_member(MainFeature::loader_overlay, r.features[FeatureKind::loader_overlay],
             nojs.counts(FeatureKind::loader_overlay));
  r.main_features.main = aggregate_main_features(main_m);
  r.main_features.whole = aggregate_main_features(whole_m);
  r.main_features.status = page_status(member_sum.main, member_sum.whole, r.main_features.main.metrics.dbr,
                                       r.main_features.whole.metrics.dbr);
  return r;
}

inline nlohmann::json to_json(const BreakageMetrics& m) {
  return {{"dbr", m.dbr}, {"tot_nojs", m.tot_nojs}, {"dbrn", m.dbrn}};
}

inline nlohmann::json to_json(const FeatureResult& f) {
  return {{"main", to_json(f.main)},
          {"whole_page", to_json(f.whole)},
          {"main_visible", to_json(f.main_visible)},
          {"status", to_string(f.status)}};
}

inline nlohmann::json to_json(const AggregatedMetrics& a) {
  auto j = to_json(a.metrics);
  j["attained_by"] = to_string(a.attained_by);
  return j;
}

inline nlohmann::json to_json(const PairResult& r) {
  nlohmann::json features = nlohmann::json::object();
  for (const auto& [k, f] : r.features) features[std::string(to_string(k))] = to_json(f);
  return {{"page_url", r.page_url},
          {"features", features},
          {"interactive", to_json(r.interactive)},
          {"main_features",
           {{"main", to_json(r.main_features.main)},
            {"whole_page", to_json(r.main_features.whole)},
            {"status", to_string(r.main_features.status)}}},
          {"main_features_status", to_string(r.main_features.status)}};
}

}  // namespace nojs
