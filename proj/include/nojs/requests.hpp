#pragma once

#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "nojs/errors.hpp"
#include "nojs/suffix_list.hpp"
#include "nojs/text.hpp"
#include "nojs/url.hpp"

namespace nojs {

enum class ResourceType { image, stylesheet, font, script, xhr, other };

inline constexpr std::array<ResourceType, 6> kResourceTypes = {
    ResourceType::image, ResourceType::stylesheet, ResourceType::font,
    ResourceType::script, ResourceType::xhr, ResourceType::other};

inline std::string_view to_string(ResourceType t) {
  switch (t) {
    case ResourceType::image: return "image";
    case ResourceType::stylesheet: return "stylesheet";
    case ResourceType::font: return "font";
    case ResourceType::script: return "script";
    case ResourceType::xhr: return "xhr";
    case ResourceType::other: return "other";
  }
  return "other";
}

inline std::optional<ResourceType> resource_type_from_string(std::string_view s) {
  for (auto t : kResourceTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct RequestRecord {
  std::string url;
  std::string page_url;
  ResourceType resource_type = ResourceType::other;
  long long timestamp_ms = 0;

  bool operator==(const RequestRecord&) const = default;
};

inline nlohmann::json to_json(const RequestRecord& r) {
  return {{"url", r.url},
          {"page_url", r.page_url},
          {"resource_type", to_string(r.resource_type)},
          {"timestamp_ms", r.timestamp_ms}};
}

struct RequestLog {
  std::vector<RequestRecord> records;
  size_t malformed_lines = 0;
};

// Reads a JSONL request log. Lines that are not objects with exactly the
// four record fields (correctly typed) are counted, not fatal.
inline RequestLog read_request_log(std::istream& in) {
  RequestLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (text::is_blank(line)) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.size() != 4 || !j.contains("url") ||
        !j.contains("page_url") || !j.contains("resource_type") || !j.contains("timestamp_ms") ||
        !j["url"].is_string() || !j["page_url"].is_string() || !j["resource_type"].is_string() ||
        !j["timestamp_ms"].is_number_integer()) {
      ++log.malformed_lines;
      continue;
    }
    auto type = resource_type_from_string(j["resource_type"].get<std::string>());
    if (!type) {
      ++log.malformed_lines;
      continue;
    }
    log.records.push_back({j["url"].get<std::string>(), j["page_url"].get<std::string>(), *type,
                           j["timestamp_ms"].get<long long>()});
  }
  return log;
}

// Registrable domains considered tracking; a host matches an entry when it
// equals it or is a subdomain of it.
class TrackerList {
 public:
  TrackerList() = default;

  static TrackerList parse(std::istream& in) {
    TrackerList t;
    std::string line;
    while (std::getline(in, line)) t.add_line(line);
    return t;
  }

  static TrackerList parse(std::string_view content) {
    TrackerList t;
    for (auto line : text::split(content, '\n')) t.add_line(line);
    return t;
  }

  // Collects every domain of a Disconnect `services.json` document:
  // {"categories": {cat: [{org: {homepage: [domains...]}}]}}.
  static TrackerList from_disconnect_json(const nlohmann::json& j) {
    TrackerList t;
    if (!j.contains("categories") || !j["categories"].is_object())
      throw ConfigError("Disconnect list: missing \"categories\" object");
    for (const auto& [category, entries] : j["categories"].items()) {
      if (!entries.is_array()) continue;
      for (const auto& org : entries) {
        if (!org.is_object()) continue;
        for (const auto& [name, sites] : org.items()) {
          if (!sites.is_object()) continue;
          for (const auto& [homepage, domains] : sites.items()) {
            if (!domains.is_array()) continue;
            for (const auto& d : domains)
              if (d.is_string()) t.add(d.get<std::string>());
          }
        }
      }
    }
    return t;
  }

  void add(std::string_view domain) {
    auto d = text::trim(domain);
    while (!d.empty() && d.front() == '.') d.remove_prefix(1);
    while (!d.empty() && d.back() == '.') d.remove_suffix(1);
    if (d.empty()) return;
    domains_.insert(text::to_ascii_lower(d));
  }

  bool matches_host(std::string_view host) const {
    if (domains_.empty()) return false;
    std::string h = text::to_ascii_lower(host);
    std::string_view v = h;
    for (;;) {
      if (domains_.count(std::string(v))) return true;
      size_t dot = v.find('.');
      if (dot == std::string_view::npos) return false;
      v.remove_prefix(dot + 1);
    }
  }

  const std::unordered_set<std::string>& domains() const { return domains_; }
  size_t size() const { return domains_.size(); }

  std::string to_text() const {
    std::set<std::string> sorted(domains_.begin(), domains_.end());
    std::string out;
    for (const auto& d : sorted) out += d + "\n";
    return out;
  }

 private:
  void add_line(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    add(line);
  }

  std::unordered_set<std::string> domains_;
};

enum class Party { first, third };

inline std::string_view to_string(Party p) { return p == Party::first ? "first" : "third"; }

inline std::string base_domain(std::string_view host, const SuffixTable& suffixes) {
  if (is_ip_literal(host)) return text::to_ascii_lower(host);
  return suffixes.base_domain(host);
}

inline std::string request_host(std::string_view url) {
  auto u = parse_absolute_url(url);
  if (!u) throw RecordError("not an absolute URL with a host: '" + std::string(url) + "'");
  return u->host;
}

inline Party classify_party(const RequestRecord& r, const SuffixTable& suffixes) {
  std::string req = request_host(r.url);
  std::string page = request_host(r.page_url);
  auto base = [&](const std::string& host) {
    try {
      return base_domain(host, suffixes);
    } catch (const SuffixOnlyError&) {
      return host;  // a bare suffix host is only first-party with itself
    }
  };
  return base(req) == base(page) ? Party::first : Party::third;
}

inline bool classify_tracking(const RequestRecord& r, const TrackerList& list) {
  return list.matches_host(request_host(r.url));
}

// Request categories reported per page, in output order.
inline const std::vector<std::string>& request_categories() {
  static const std::vector<std::string> kCategories = [] {
    std::vector<std::string> c = {"all", "non_tracking", "tracking"};
    for (std::string party : {"first_party", "third_party"}) {
      c.push_back(party);
      for (auto t : kResourceTypes) c.push_back(party + "." + std::string(to_string(t)));
    }
    return c;
  }();
  return kCategories;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation

  bool operator==(const MeanSd&) const = default;
};

inline MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  if (values.empty()) return out;
  double sum = 0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

// Relative change of the mean, in percent. Undefined for a zero baseline
// unless both means are zero.
inline std::optional<double> mean_change_pct(double mean_plain, double mean_nojs) {
  if (mean_plain == 0.0) {
    if (mean_nojs == 0.0) return 0.0;
    return std::nullopt;
  }
  return (mean_nojs - mean_plain) / mean_plain * 100.0;
}

struct CategorySummary {
  std::string name;
  MeanSd plain;
  MeanSd nojs;
  std::optional<double> mean_change_pct;
};

struct RequestSummary {
  size_t page_count = 0;
  size_t skipped_records = 0;
  std::vector<CategorySummary> categories;

  const CategorySummary& category(std::string_view name) const {
    for (const auto& c : categories)
      if (c.name == name) return c;
    throw std::out_of_range("no request category " + std::string(name));
  }
};

using PageRequestCounts = std::map<std::string, long long>;

namespace requests_detail {

inline std::map<std::string, PageRequestCounts> count_per_page(
    const std::vector<RequestRecord>& records, const TrackerList& list,
    const SuffixTable& suffixes, size_t& skipped) {
  std::map<std::string, PageRequestCounts> pages;
  for (const auto& r : records) {
    Party party;
    bool tracking;
    try {
      party = classify_party(r, suffixes);
      tracking = classify_tracking(r, list);
    } catch (const RecordError&) {
      ++skipped;
      continue;
    }
    auto& c = pages[r.page_url];
    if (c.empty())
      for (const auto& name : request_categories()) c[name] = 0;
    c["all"] += 1;
    c[tracking ? "tracking" : "non_tracking"] += 1;
    std::string p = party == Party::first ? "first_party" : "third_party";
    c[p] += 1;
    c[p + "." + std::string(to_string(r.resource_type))] += 1;
  }
  return pages;
}

}  // namespace requests_detail

// Table-style request summary: per category, mean and SD of the per-page
// request counts for each variant, and the relative change of the mean.
inline RequestSummary summarize(const std::vector<RequestRecord>& plain,
                                const std::vector<RequestRecord>& nojs, const TrackerList& list,
                                const SuffixTable& suffixes) {
  RequestSummary s;
  auto plain_pages = requests_detail::count_per_page(plain, list, suffixes, s.skipped_records);
  auto nojs_pages = requests_detail::count_per_page(nojs, list, suffixes, s.skipped_records);

  std::vector<std::string> orphans;
  for (const auto& [url, _] : plain_pages)
    if (!nojs_pages.count(url)) orphans.push_back("plain-only: " + url);
  for (const auto& [url, _] : nojs_pages)
    if (!plain_pages.count(url)) orphans.push_back("nojs-only: " + url);
  if (!orphans.empty())
    throw PairingError("request logs cover different page sets (" + std::to_string(orphans.size()) +
                           " orphan pages)",
                       orphans);

  s.page_count = plain_pages.size();
  for (const auto& name : request_categories()) {
    std::vector<double> p, n;
    for (const auto& [url, counts] : plain_pages) p.push_back(static_cast<double>(counts.at(name)));
    for (const auto& [url, counts] : nojs_pages) n.push_back(static_cast<double>(counts.at(name)));
    CategorySummary c;
    c.name = name;
    c.plain = mean_sd(p);
    c.nojs = mean_sd(n);
    c.mean_change_pct = mean_change_pct(c.plain.mean, c.nojs.mean);
    s.categories.push_back(std::move(c));
  }
  return s;
}

inline nlohmann::json to_json(const RequestSummary& s) {
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : s.categories) {
    cats.push_back({{"name", c.name},
                    {"plain", {{"mean", c.plain.mean}, {"sd", c.plain.sd}}},
                    {"nojs", {{"mean", c.nojs.mean}, {"sd", c.nojs.sd}}},
                    {"mean_change_pct", c.mean_change_pct ? nlohmann::json(*c.mean_change_pct)
                                                          : nlohmann::json(nullptr)}});
  }
  return {{"page_count", s.page_count}, {"skipped_records", s.skipped_records}, {"categories", cats}};
}

}  // namespace nojs
