#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include "support.hpp"

using namespace nojs::testing;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("nojs-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name, const std::string& content) {
    auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  CmdResult lint(const std::string& args) {
    auto out = dir_ / "stdout", err = dir_ / "stderr";
    std::string cmd = std::string(NOJS_LINT_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    CmdResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(lint("").code, 1);
  EXPECT_EQ(lint("bogus").code, 1);
  EXPECT_EQ(lint("inspect").code, 1);
  EXPECT_EQ(lint("inspect x.html --variant maybe").code, 1);
  EXPECT_EQ(lint("--help").code, 0);
}

TEST_F(Cli, InspectReport) {
  auto html = file("p.html", "<main><p>x</p><a href=\"#missing\">m</a></main>");
  auto r = lint("inspect " + q(html) + " --url https://e.example/ --verdicts");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["page_url"], "https://e.example/");
  EXPECT_EQ(j["variant"], "nojs");
  EXPECT_EQ(j["features"]["mislinked_fragment_anchor"]["main"]["broken_visible"], 1);
  bool found = false;
  for (const auto& v : j["verdicts"]) found |= v["kind"] == "mislinked_fragment_anchor" && v["broken"] == true;
  EXPECT_TRUE(found);
  j.erase("verdicts");
  EXPECT_NO_THROW(nojs::report_from_json(j));
}

TEST_F(Cli, InspectMissingFileAndBadConfig) {
  EXPECT_EQ(lint("inspect " + q(dir_ / "none.html")).code, 2);
  auto html = file("p.html", "<p>x</p>");
  auto cfg = file("c.json", R"({"no_such_key": 1})");
  auto r = lint("inspect " + q(html) + " --config " + q(cfg));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no_such_key"), std::string::npos) << r.err;
  auto bad_sel = file("s.json", R"({"sections": {"main": "div > p"}})");
  EXPECT_EQ(lint("inspect " + q(html) + " --config " + q(bad_sel)).code, 2);
}

TEST_F(Cli, InspectConfigChangesSections) {
  auto html = file("p.html", "<div id=content><a href=\"javascript:void(0)\">x</a></div><main><p>y</p></main>");
  auto cfg = file("c.json", R"({"sections": {"main": ["#content"]}})");
  auto r = lint("inspect " + q(html) + " --config " + q(cfg));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["features"]["empty_anchor_button"]["main"]["broken_visible"], 1);
}

TEST_F(Cli, CompareHtmlAndReports) {
  auto plain = file("plain.html", "<main><p>content</p></main>");
  auto nojs = file("nojs.html", "<main></main>");
  auto r = lint("compare --plain " + q(plain) + " --nojs " + q(nojs) + " --url https://e.example/");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["main_features_status"], "broken_in_main");
  EXPECT_EQ(j["features"]["page_text"]["main"]["dbr"], 1);

  // Reports produced by inspect can be compared directly.
  auto rp = lint("inspect " + q(plain) + " --variant plain --url https://e.example/");
  auto rn = lint("inspect " + q(nojs) + " --url https://e.example/");
  auto pj = file("plain.json", rp.out), nj = file("nojs.json", rn.out);
  auto r2 = lint("compare --plain " + q(pj) + " --nojs " + q(nj));
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(nlohmann::json::parse(r2.out), j);

  auto mismatched = file("other.json", lint("inspect " + q(nojs) + " --url https://other.example/").out);
  EXPECT_EQ(lint("compare --plain " + q(pj) + " --nojs " + q(mismatched)).code, 2);
  auto broken = file("broken.json", R"({"page_url": "x"})");
  EXPECT_EQ(lint("compare --plain " + q(pj) + " --nojs " + q(broken)).code, 2);
}

TEST_F(Cli, CorpusWritesStreamAndSummary) {
  auto out = dir_ / "pages.jsonl", summary = dir_ / "summary.json";
  auto r = lint("corpus --root " + q(fixture("corpus")) + " --out " + q(out) + " --summary " + q(summary) +
               " --jobs 2");
  ASSERT_EQ(r.code, 0) << r.err;
  auto s = nlohmann::json::parse(slurp(summary));
  EXPECT_EQ(s["analyzed"], 22);
  std::istringstream lines(slurp(out));
  size_t n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  EXPECT_EQ(n, 23u);

  auto r2 = lint("corpus --root " + q(fixture("corpus")) + " --out " + q(dir_ / "p2.jsonl"));
  ASSERT_EQ(r2.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r2.out), s);
  EXPECT_EQ(slurp(dir_ / "p2.jsonl"), slurp(out));

  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(lint("corpus --root " + q(dir_ / "empty") + " --out " + q(dir_ / "x.jsonl")).code, 2);
  EXPECT_EQ(lint("corpus --root " + q(fixture("corpus")) + " --out " + q(out) + " --jobs 0").code, 1);
}

TEST_F(Cli, RequestsSummary) {
  auto rec = [](const std::string& url, const std::string& page, const std::string& type) {
    return nlohmann::json{{"url", url}, {"page_url", page}, {"resource_type", type}, {"timestamp_ms", 1}}.dump() +
           "\n";
  };
  auto plain = file("plain.jsonl", rec("https://a.com/x.js", "https://a.com/", "script") +
                                       rec("https://tracker.net/p", "https://a.com/", "image") + "garbage\n");
  auto nojs = file("nojs.jsonl", rec("https://a.com/i.png", "https://a.com/", "image"));
  auto trackers = file("trackers.txt", "tracker.net\n");
  auto r = lint("requests --plain-log " + q(plain) + " --nojs-log " + q(nojs) + " --trackers " + q(trackers) +
               " --suffixes " + q(fixture("psl/suffixes.dat")));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["malformed_lines"], 1);
  EXPECT_EQ(j["page_count"], 1);
  EXPECT_EQ(j["categories"][0]["name"], "all");
  EXPECT_DOUBLE_EQ(j["categories"][0]["mean_change_pct"].get<double>(), -50.0);

  auto orphan = file("orphan.jsonl", rec("https://b.com/i.png", "https://b.com/", "image"));
  auto r2 = lint("requests --plain-log " + q(plain) + " --nojs-log " + q(orphan) + " --trackers " + q(trackers) +
                " --suffixes " + q(fixture("psl/suffixes.dat")));
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.err.find("plain-only: https://a.com/"), std::string::npos) << r2.err;
  EXPECT_NE(r2.err.find("nojs-only: https://b.com/"), std::string::npos) << r2.err;
}

TEST_F(Cli, TrackersConversion) {
  auto services = file("services.json", R"({"categories": {"Ads": [{"X": {"https://x/": ["b.com", "a.com"]}}]}})");
  auto r = lint("trackers --disconnect " + q(services));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "a.com\nb.com\n");
  auto out = dir_ / "list.txt";
  EXPECT_EQ(lint("trackers --disconnect " + q(services) + " --out " + q(out)).code, 0);
  EXPECT_EQ(slurp(out), "a.com\nb.com\n");
  EXPECT_EQ(lint("trackers --disconnect " + q(file("bad.json", "{"))).code, 2);
  EXPECT_EQ(lint("trackers --disconnect " + q(file("empty.json", "{}"))).code, 2);
}
