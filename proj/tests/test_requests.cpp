#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace nojs;
using namespace nojs::testing;

namespace {

SuffixTable psl() { return SuffixTable::parse(slurp(fixture("psl/suffixes.dat"))); }

std::vector<std::string> labels_of(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l, '.');) out.push_back(l);
  return out;
}

// Textbook public-suffix algorithm: collect every matching rule, let an
// exception win, otherwise take the rule with the most labels, default "*".
std::optional<std::string> oracle_base(const std::string& host, const std::vector<std::string>& rules) {
  auto h = labels_of(host);
  size_t prevailing = 0;
  bool exception = false;
  for (const auto& raw : rules) {
    bool exc = raw[0] == '!';
    auto r = labels_of(exc ? raw.substr(1) : raw);
    if (r.size() > h.size()) continue;
    bool match = true;
    for (size_t i = 0; i < r.size(); ++i) {
      const auto& rl = r[r.size() - 1 - i];
      if (rl != "*" && rl != h[h.size() - 1 - i]) match = false;
    }
    if (!match) continue;
    if (exc) {
      exception = true;
      prevailing = r.size() - 1;
    } else if (!exception) {
      prevailing = std::max(prevailing, r.size());
    }
  }
  if (prevailing == 0) {
    if (h.size() == 1) return host;
    prevailing = 1;
  }
  if (prevailing >= h.size()) return std::nullopt;
  std::string out;
  for (size_t i = h.size() - prevailing - 1; i < h.size(); ++i) out += (out.empty() ? "" : ".") + h[i];
  return out;
}

RequestRecord rec(std::string url, std::string page, ResourceType t = ResourceType::script) {
  return {std::move(url), std::move(page), t, 0};
}

}  // namespace

TEST(BaseDomain, Examples) {
  auto t = psl();
  EXPECT_EQ(base_domain("cdn.example.com", t), "example.com");
  EXPECT_EQ(base_domain("a.b.example.co.uk", t), "example.co.uk");
  EXPECT_EQ(base_domain("localhost", t), "localhost");
  EXPECT_EQ(base_domain("WWW.Example.COM.", t), "example.com");
  EXPECT_EQ(base_domain("192.168.0.1", t), "192.168.0.1");
  EXPECT_EQ(base_domain("a.b.foo.ck", t), "b.foo.ck");
  EXPECT_EQ(base_domain("www.ck", t), "www.ck");
  EXPECT_EQ(base_domain("x.city.kobe.jp", t), "city.kobe.jp");
  EXPECT_THROW(base_domain("co.uk", t), SuffixOnlyError);
  EXPECT_THROW(base_domain("foo.ck", t), SuffixOnlyError);
}

TEST(BaseDomain, RandomHostsMatchOracle) {
  auto t = psl();
  std::vector<std::string> rules;
  const std::string dat = slurp(fixture("psl/suffixes.dat"));
  for (auto line : text::split(dat, '\n')) {
    auto l = text::trim(line);
    if (!l.empty() && !l.starts_with("//")) rules.emplace_back(l);
  }
  const char* parts[] = {"com", "co", "uk", "ck", "www", "kobe", "jp", "city", "a", "example", "net"};
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(1, 5), part(0, 10);
  for (int i = 0; i < 5000; ++i) {
    std::string host;
    int n = len(rng);
    for (int k = 0; k < n; ++k) host += (k ? "." : "") + std::string(parts[part(rng)]);
    auto want = oracle_base(host, rules);
    if (want) {
      ASSERT_EQ(base_domain(host, t), *want) << host;
    } else {
      ASSERT_THROW(base_domain(host, t), SuffixOnlyError) << host;
    }
  }
}

TEST(Party, Examples) {
  auto t = psl();
  EXPECT_EQ(classify_party(rec("https://cdn.example.com/a.js", "https://www.example.com/"), t), Party::first);
  EXPECT_EQ(classify_party(rec("https://tracker.net/p", "https://www.example.com/"), t), Party::third);
  EXPECT_EQ(classify_party(rec("https://a.example.co.uk/", "https://b.example.co.uk/x"), t), Party::first);
  EXPECT_EQ(classify_party(rec("https://other.co.uk/", "https://b.example.co.uk/x"), t), Party::third);
  EXPECT_EQ(classify_party(rec("http://10.0.0.1/x", "http://10.0.0.1/"), t), Party::first);
  EXPECT_EQ(classify_party(rec("https://co.uk/", "https://co.uk/"), t), Party::first);
  EXPECT_THROW(classify_party(rec("/relative", "https://example.com/"), t), RecordError);
  EXPECT_THROW(classify_party(rec("data:image/png;base64,xx", "https://example.com/"), t), RecordError);
}

TEST(Tracking, Examples) {
  auto list = TrackerList::parse("# trackers\ntracker.net\n  .Ads.Example.com.  # inline\n\n");
  EXPECT_EQ(list.size(), 2u);
  EXPECT_TRUE(classify_tracking(rec("https://tracker.net/p", "https://x.com/"), list));
  EXPECT_TRUE(classify_tracking(rec("https://a.b.tracker.net/p", "https://x.com/"), list));
  EXPECT_TRUE(classify_tracking(rec("https://ads.example.com/p", "https://x.com/"), list));
  EXPECT_FALSE(classify_tracking(rec("https://nottracker.net/p", "https://x.com/"), list));
  EXPECT_FALSE(classify_tracking(rec("https://example.com/p", "https://x.com/"), list));
  EXPECT_FALSE(classify_tracking(rec("https://tracker.net.evil.com/", "https://x.com/"), list));
  EXPECT_EQ(list.to_text(), "ads.example.com\ntracker.net\n");
}

TEST(Tracking, DisconnectConversion) {
  auto j = nlohmann::json::parse(R"({
    "license": "x",
    "categories": {
      "Advertising": [{"AdCo": {"http://adco.example/": ["adco.net", "adco-cdn.com"]}}],
      "Analytics": [{"Stats": {"http://stats.example/": ["stats.io"], "performance": "true"}}]
    }})");
  auto list = TrackerList::from_disconnect_json(j);
  EXPECT_EQ(list.to_text(), "adco-cdn.com\nadco.net\nstats.io\n");
  EXPECT_THROW(TrackerList::from_disconnect_json(nlohmann::json::object()), ConfigError);
}

TEST(RequestLog, MalformedLinesCounted) {
  std::istringstream in(
      R"({"url":"https://a.com/x.js","page_url":"https://a.com/","resource_type":"script","timestamp_ms":5})" "\n"
      "\n"
      "not json\n"
      R"({"url":"https://a.com/","page_url":"https://a.com/","resource_type":"video","timestamp_ms":5})" "\n"
      R"({"url":"https://a.com/","page_url":"https://a.com/","resource_type":"image"})" "\n"
      R"({"url":"https://a.com/","page_url":"https://a.com/","resource_type":"image","timestamp_ms":"5"})" "\n"
      R"({"url":"https://a.com/","page_url":"https://a.com/","resource_type":"image","timestamp_ms":1,"x":1})" "\n"
      R"([1,2,3])" "\n"
      R"({"url":"https://a.com/f.woff","page_url":"https://a.com/","resource_type":"font","timestamp_ms":7})" "\n");
  auto log = read_request_log(in);
  ASSERT_EQ(log.records.size(), 2u);
  EXPECT_EQ(log.malformed_lines, 6u);
  EXPECT_EQ(log.records[1].resource_type, ResourceType::font);
  EXPECT_EQ(log.records[1].timestamp_ms, 7);
}

TEST(RequestLog, RecordJsonRoundTrip) {
  auto r = rec("https://a.com/s.css", "https://a.com/", ResourceType::stylesheet);
  r.timestamp_ms = 123;
  std::istringstream in(to_json(r).dump() + "\n");
  auto log = read_request_log(in);
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(to_json(log.records[0]), to_json(r));
}

TEST(MeanChange, Examples) {
  EXPECT_NEAR(*mean_change_pct(72.6, 28.3), -61.0, 0.05);
  EXPECT_NEAR(*mean_change_pct(21.7, 3.3), (3.3 - 21.7) / 21.7 * 100.0, 1e-9);
  EXPECT_EQ(*mean_change_pct(0, 0), 0.0);
  EXPECT_FALSE(mean_change_pct(0, 3));
  EXPECT_DOUBLE_EQ(*mean_change_pct(4, 6), 50.0);
}

TEST(MeanSd, PopulationDeviation) {
  auto m = mean_sd({2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(m.mean, 5.0);
  EXPECT_DOUBLE_EQ(m.sd, 2.0);
  EXPECT_EQ(mean_sd({}), (MeanSd{}));
}

namespace {

struct Fixture {
  SuffixTable suffixes = psl();
  TrackerList trackers = TrackerList::parse("tracker.net\n");
};

std::vector<RequestRecord> random_log(std::mt19937& rng, const std::vector<std::string>& pages) {
  const char* hosts[] = {"https://www.site{}.com/", "https://cdn.site{}.com/", "https://tracker.net/",
                         "https://other.co.uk/", "https://x.tracker.net/"};
  std::uniform_int_distribution<int> count(0, 30), host(0, 4), type(0, 5);
  std::vector<RequestRecord> out;
  for (size_t p = 0; p < pages.size(); ++p) {
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
      std::string h = hosts[host(rng)];
      if (auto at = h.find("{}"); at != std::string::npos) h.replace(at, 2, std::to_string(p));
      out.push_back(rec(h + "r" + std::to_string(i), pages[p], kResourceTypes[static_cast<size_t>(type(rng))]));
    }
    // Every page loads its own document so it appears in the log.
    out.push_back(rec(pages[p], pages[p], ResourceType::other));
  }
  return out;
}

}  // namespace

TEST(Summarize, IdenticalLogsHaveZeroChange) {
  Fixture f;
  std::mt19937 rng(1);
  std::vector<std::string> pages{"https://www.site0.com/", "https://www.site1.com/"};
  auto log = random_log(rng, pages);
  auto s = summarize(log, log, f.trackers, f.suffixes);
  EXPECT_EQ(s.page_count, 2u);
  ASSERT_EQ(s.categories.size(), request_categories().size());
  for (const auto& c : s.categories) {
    ASSERT_TRUE(c.mean_change_pct) << c.name;
    EXPECT_EQ(*c.mean_change_pct, 0.0) << c.name;
    EXPECT_EQ(c.plain, c.nojs);
  }
}

TEST(Summarize, PartitionsAndAdditivity) {
  Fixture f;
  std::mt19937 rng(2);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> pages;
    for (int p = 0; p < 1 + round % 7; ++p) pages.push_back("https://www.site" + std::to_string(p) + ".com/");
    auto plain = random_log(rng, pages), nojs = random_log(rng, pages);
    auto s = summarize(plain, nojs, f.trackers, f.suffixes);
    auto mean = [&](const std::string& name, bool nj) {
      const auto& c = s.category(name);
      return nj ? c.nojs.mean : c.plain.mean;
    };
    for (bool nj : {false, true}) {
      EXPECT_NEAR(mean("tracking", nj) + mean("non_tracking", nj), mean("all", nj), 1e-9);
      EXPECT_NEAR(mean("first_party", nj) + mean("third_party", nj), mean("all", nj), 1e-9);
      for (std::string party : {"first_party", "third_party"}) {
        double sum = 0;
        for (auto t : kResourceTypes) sum += mean(party + "." + std::string(to_string(t)), nj);
        EXPECT_NEAR(sum, mean(party, nj), 1e-9);
      }
      // Recount from the raw records.
      const auto& log = nj ? nojs : plain;
      double tracking = 0, third = 0;
      for (const auto& r : log) {
        tracking += classify_tracking(r, f.trackers);
        third += classify_party(r, f.suffixes) == Party::third;
      }
      EXPECT_NEAR(mean("all", nj), double(log.size()) / double(pages.size()), 1e-9);
      EXPECT_NEAR(mean("tracking", nj), tracking / double(pages.size()), 1e-9);
      EXPECT_NEAR(mean("third_party", nj), third / double(pages.size()), 1e-9);
    }
  }
}

TEST(Summarize, OrphanPagesRaisePairingError) {
  Fixture f;
  std::vector<RequestRecord> plain{rec("https://a.com/x", "https://a.com/"), rec("https://b.com/x", "https://b.com/")};
  std::vector<RequestRecord> nojs{rec("https://a.com/x", "https://a.com/"), rec("https://c.com/x", "https://c.com/")};
  try {
    summarize(plain, nojs, f.trackers, f.suffixes);
    FAIL() << "expected PairingError";
  } catch (const PairingError& e) {
    EXPECT_EQ(e.orphans(), (std::vector<std::string>{"plain-only: https://b.com/", "nojs-only: https://c.com/"}));
  }
}

TEST(Summarize, UnparseableRecordsSkipped) {
  Fixture f;
  std::vector<RequestRecord> plain{rec("https://a.com/x", "https://a.com/"), rec("blob:xyz", "https://a.com/")};
  std::vector<RequestRecord> nojs{rec("https://a.com/x", "https://a.com/")};
  auto s = summarize(plain, nojs, f.trackers, f.suffixes);
  EXPECT_EQ(s.skipped_records, 1u);
  EXPECT_EQ(s.category("all").plain.mean, 1.0);
}

TEST(Summarize, ExampleMeansAndDeviation) {
  Fixture f;
  // Page A: 3 plain / 1 nojs requests; page B: 1 plain / 1 nojs.
  std::vector<RequestRecord> plain{rec("https://tracker.net/1", "https://a.com/"),
                                   rec("https://tracker.net/2", "https://a.com/"),
                                   rec("https://a.com/x", "https://a.com/", ResourceType::image),
                                   rec("https://b.com/x", "https://b.com/", ResourceType::image)};
  std::vector<RequestRecord> nojs{rec("https://a.com/x", "https://a.com/", ResourceType::image),
                                  rec("https://b.com/x", "https://b.com/", ResourceType::image)};
  auto s = summarize(plain, nojs, f.trackers, f.suffixes);
  EXPECT_DOUBLE_EQ(s.category("all").plain.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.category("all").plain.sd, 1.0);
  EXPECT_DOUBLE_EQ(*s.category("all").mean_change_pct, -50.0);
  EXPECT_DOUBLE_EQ(*s.category("tracking").mean_change_pct, -100.0);
  EXPECT_DOUBLE_EQ(s.category("first_party.image").nojs.mean, 1.0);
  EXPECT_DOUBLE_EQ(*s.category("first_party.font").mean_change_pct, 0.0);
  auto j = to_json(s);
  EXPECT_EQ(j["categories"].size(), request_categories().size());
  EXPECT_EQ(j["page_count"], 2);
}
