#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "nojs/config.hpp"
#include "nojs/errors.hpp"
#include "nojs/parser.hpp"
#include "nojs/report.hpp"

namespace nojs {

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
inline double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw EmptyInputError("percentile of an empty list");
  if (!(p > 0.0 && p <= 100.0)) throw ContractError("percentile: p must be in (0, 100]");
  std::sort(values.begin(), values.end());
  auto n = static_cast<double>(values.size());
  auto rank = static_cast<size_t>(std::ceil(p / 100.0 * n - 1e-9));
  rank = std::clamp<size_t>(rank, 1, values.size());
  return values[rank - 1];
}

inline constexpr std::string_view kUncategorized = "uncategorized";

struct PageMeta {
  std::string url;
  std::optional<long long> load_ms_plain;
  std::optional<long long> load_ms_nojs;
  bool skipped = false;
  std::vector<std::string> categories;
};

// Reads meta.json. `skipped` may be a bool, a reason string, or a
// per-variant object/list of reasons; anything non-empty means skipped.
inline PageMeta parse_meta(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("meta.json: top level must be an object");
  PageMeta m;
  if (!j.contains("url") || !j["url"].is_string()) throw SchemaError("meta.json: missing string 'url'");
  m.url = j["url"].get<std::string>();
  auto ms = [&](const char* key) -> std::optional<long long> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number()) throw SchemaError(std::string("meta.json: '") + key + "' must be a number");
    return static_cast<long long>(std::llround(j[key].get<double>()));
  };
  m.load_ms_plain = ms("load_ms_plain");
  m.load_ms_nojs = ms("load_ms_nojs");
  if (j.contains("skipped")) {
    const auto& s = j["skipped"];
    if (s.is_boolean()) {
      m.skipped = s.get<bool>();
    } else if (s.is_string() || s.is_array()) {
      m.skipped = !s.empty() && s != "";
    } else if (s.is_object()) {
      for (const auto& [variant, reason] : s.items())
        if (!reason.is_null() && reason != false && reason != "") m.skipped = true;
    } else if (!s.is_null()) {
      throw SchemaError("meta.json: unsupported 'skipped' value");
    }
  }
  if (j.contains("categories") && !j["categories"].is_null()) {
    if (!j["categories"].is_array()) throw SchemaError("meta.json: 'categories' must be a list");
    for (const auto& c : j["categories"]) {
      if (!c.is_string()) throw SchemaError("meta.json: categories must be strings");
      m.categories.push_back(c.get<std::string>());
    }
  }
  return m;
}

struct PageOutcome {
  std::string page_id;
  std::vector<std::string> groups;
  std::optional<PairResult> result;
  std::string skip_reason;  // set when result is empty
};

struct CorpusSummary {
  size_t page_count = 0;
  size_t analyzed = 0;
  size_t skipped = 0;
  std::map<std::string, size_t> skip_reasons;
  double share_all_main_features_working_whole = 0.0;
  double share_all_main_features_working_main = 0.0;
  // group -> feature -> p90 of visible main-scope DBR
  std::map<std::string, std::map<std::string, double>> p90_dbr_visible_main;
};

inline nlohmann::json to_json(const CorpusSummary& s) {
  return {{"page_count", s.page_count},
          {"analyzed", s.analyzed},
          {"skipped", s.skipped},
          {"skip_reasons", s.skip_reasons},
          {"share_all_main_features_working_whole", s.share_all_main_features_working_whole},
          {"share_all_main_features_working_main", s.share_all_main_features_working_main},
          {"p90_dbr_visible_main", s.p90_dbr_visible_main}};
}

inline nlohmann::json to_json(const PageOutcome& o) {
  nlohmann::json j = o.result ? to_json(*o.result) : nlohmann::json::object();
  j["page_id"] = o.page_id;
  j["groups"] = o.groups;
  if (!o.result) j["skipped"] = o.skip_reason;
  return j;
}

namespace corpus_detail {

namespace fs = std::filesystem;

inline std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return std::move(ss).str();
}

inline PageOutcome process_page(const fs::path& dir, const AnalyzerConfig& cfg) {
  PageOutcome out;
  out.page_id = dir.filename().string();
  auto skip = [&](std::string reason) {
    out.skip_reason = std::move(reason);
    return out;
  };
  auto meta_text = read_file(dir / "meta.json");
  if (!meta_text) return skip("missing_meta");
  PageMeta meta;
  try {
    meta = parse_meta(nlohmann::json::parse(*meta_text));
  } catch (const std::exception&) {
    return skip("invalid_meta");
  }
  out.groups = meta.categories;
  if (out.groups.empty()) out.groups.emplace_back(kUncategorized);
  if (meta.skipped) return skip("crawl_skipped");

  auto plain_html = read_file(dir / "plain.html");
  auto nojs_html = read_file(dir / "nojs.html");
  if (!plain_html || !nojs_html) return skip("missing_html");

  auto start = std::chrono::steady_clock::now();
  try {
    auto plain = build_report(parse_document(*plain_html), Variant::plain, cfg, meta.url);
    auto nojs = build_report(parse_document(*nojs_html), Variant::nojs, cfg, meta.url);
    plain.load_ms = meta.load_ms_plain;
    nojs.load_ms = meta.load_ms_nojs;
    auto result = compare_pair(plain, nojs, cfg.visible_only);
    // No preemption: the budget is checked once the pair is done.
    if (std::chrono::steady_clock::now() - start > cfg.page_budget) return skip("inspection_timeout");
    out.result = std::move(result);
  } catch (const DecodeError&) {
    return skip("decode_error");
  } catch (const std::exception&) {
    return skip("analysis_error");
  }
  return out;
}

}  // namespace corpus_detail

// Folds page outcomes into a summary. Order-independent except for the
// accumulated vectors, which are sorted before use.
class SummaryBuilder {
 public:
  void add(const PageOutcome& o) {
    ++summary_.page_count;
    if (!o.result) {
      ++summary_.skipped;
      ++summary_.skip_reasons[o.skip_reason];
      return;
    }
    ++summary_.analyzed;
    auto status = o.result->main_features_status();
    if (status == PageStatus::working_whole_page) ++working_whole_;
    if (status == PageStatus::working_whole_page || status == PageStatus::working_main_only) ++working_main_;
    for (const auto& group : o.groups) {
      auto& g = dbr_[group];
      for (const auto& [k, f] : o.result->features)
        g[std::string(to_string(k))].push_back(static_cast<double>(f.main_visible.dbr));
      g["interactive"].push_back(static_cast<double>(o.result->interactive.main_visible.dbr));
    }
  }

  CorpusSummary finish() const {
    CorpusSummary s = summary_;
    if (s.analyzed > 0) {
      s.share_all_main_features_working_whole = static_cast<double>(working_whole_) / static_cast<double>(s.analyzed);
      s.share_all_main_features_working_main = static_cast<double>(working_main_) / static_cast<double>(s.analyzed);
    }
    for (const auto& [group, per_feature] : dbr_)
      for (const auto& [feature, values] : per_feature) s.p90_dbr_visible_main[group][feature] = percentile(values, 90);
    return s;
  }

 private:
  CorpusSummary summary_;
  size_t working_whole_ = 0;
  size_t working_main_ = 0;
  std::map<std::string, std::map<std::string, std::vector<double>>> dbr_;
};

// Page directories under root, sorted by name.
inline std::vector<std::filesystem::path> list_pages(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec)) throw EmptyCorpusError("corpus root is not a directory: " + root.string());
  std::vector<std::filesystem::path> pages;
  for (const auto& entry : std::filesystem::directory_iterator(root))
    if (entry.is_directory()) pages.push_back(entry.path());
  std::sort(pages.begin(), pages.end());
  if (pages.empty()) throw EmptyCorpusError("corpus has no page directories: " + root.string());
  return pages;
}

// Analyzes every page pair under root. Pages are processed `jobs` at a time;
// results are emitted to `stream` (JSONL, one line per page) and folded into
// the summary in page-id order whatever the scheduling.
inline CorpusSummary run_corpus(const std::filesystem::path& root, const AnalyzerConfig& cfg = {},
                                std::ostream* stream = nullptr, unsigned jobs = 1) {
  auto pages = list_pages(root);
  jobs = std::max(1u, jobs);
  SummaryBuilder summary;
  auto emit = [&](const PageOutcome& o) {
    summary.add(o);
    if (stream) *stream << to_json(o).dump() << '\n';
  };
  if (jobs == 1) {
    for (const auto& p : pages) emit(corpus_detail::process_page(p, cfg));
  } else {
    size_t window = static_cast<size_t>(jobs) * 4;
    for (size_t begin = 0; begin < pages.size(); begin += window) {
      size_t end = std::min(pages.size(), begin + window);
      std::vector<PageOutcome> outcomes(end - begin);
      std::vector<std::thread> workers;
      for (unsigned t = 0; t < jobs; ++t)
        workers.emplace_back([&, t] {
          for (size_t i = begin + t; i < end; i += jobs) outcomes[i - begin] = corpus_detail::process_page(pages[i], cfg);
        });
      for (auto& w : workers) w.join();
      for (const auto& o : outcomes) emit(o);
    }
  }
  if (stream) stream->flush();
  return summary.finish();
}

}  // namespace nojs
