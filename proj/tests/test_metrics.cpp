#include <gtest/gtest.h>

#include <climits>
#include <random>

#include "support.hpp"

using namespace nojs;
using namespace nojs::testing;

namespace {

FeatureCount fc(long long bv, long long bh, long long wv, long long wh, Scope s = Scope::main) {
  return {bv, bh, wv, wh, s};
}

}  // namespace

TEST(Dbr, Examples) {
  EXPECT_EQ(dbr(fc(5, 0, 0, 0), fc(2, 0, 0, 0)), 3);
  EXPECT_EQ(dbr(fc(0, 0, 1, 0), fc(3, 0, 0, 0)), -3);
  EXPECT_EQ(dbr(fc(1, 2, 3, 4), fc(1, 2, 3, 4)), 0);
}

TEST(Dbr, VisibleOnly) {
  EXPECT_EQ(dbr(fc(2, 5, 0, 0), fc(1, 0, 0, 0), true), 1);
  EXPECT_EQ(dbr(fc(2, 5, 0, 0), fc(1, 0, 0, 0), false), 6);
}

TEST(Dbr, ScopeMismatch) {
  EXPECT_THROW(dbr(fc(1, 0, 0, 0, Scope::main), fc(0, 0, 0, 0, Scope::whole_page)), ContractError);
  FeatureCount a = fc(1, 0, 0, 0, Scope::main);
  EXPECT_THROW(a += fc(1, 0, 0, 0, Scope::whole_page), ContractError);
}

TEST(Dbrn, Examples) {
  EXPECT_DOUBLE_EQ(dbrn(fc(4, 0, 0, 0), fc(0, 0, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(dbrn(fc(0, 0, 0, 0), fc(3, 0, 0, 0)), 0.0);
  EXPECT_DOUBLE_EQ(dbrn(fc(1, 0, 3, 0), fc(0, 0, 0, 0)), 0.25);
}

// Metric definitions restated directly over the eight counters, compared on
// every grid point with entries in [0, 5].
TEST(Dbrn, ExhaustiveGridMatchesOracle) {
  long long checked = 0;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int c = 0; c <= 5; ++c)
        for (int d = 0; d <= 5; ++d)
          for (int e = 0; e <= 5; ++e)
            for (int f = 0; f <= 5; ++f)
              for (int g = 0; g <= 5; ++g)
                for (int h = 0; h <= 5; ++h) {
                  auto n = fc(a, b, c, d), p = fc(e, f, g, h);
                  long long want_dbr = (a + b) - (e + f);
                  long long tot = a + b + c + d;
                  double want_dbrn = tot ? static_cast<double>(want_dbr) / static_cast<double>(tot) : 0.0;
                  auto m = breakage_metrics(n, p);
                  ASSERT_EQ(m.dbr, want_dbr);
                  ASSERT_EQ(m.tot_nojs, tot);
                  ASSERT_EQ(m.dbrn, want_dbrn);
                  if (tot > 0) { ASSERT_LE(m.dbrn, 1.0); }
                  if (tot > 0) { ASSERT_EQ(m.dbrn == 1.0, c + d == 0 && e + f == 0); }
                  if (m.dbr == 0) { ASSERT_EQ(m.dbrn, 0.0); }
                  ++checked;
                }
  EXPECT_EQ(checked, 1679616);
}

TEST(AggregateInteractive, SumsFiveKinds) {
  std::map<FeatureKind, CountPair> m;
  for (auto k : kInteractiveFeatures) m[k] = {fc(1, 0, 0, 0), fc(0, 0, 0, 0)};
  auto [n, p] = aggregate_interactive(m);
  EXPECT_EQ(n.broken_visible, 5);
  EXPECT_EQ(p, fc(0, 0, 0, 0));
}

TEST(AggregateInteractive, AllZeroAndMissing) {
  std::map<FeatureKind, CountPair> m;
  for (auto k : kInteractiveFeatures) m[k] = {fc(0, 0, 0, 0), fc(0, 0, 0, 0)};
  EXPECT_EQ(aggregate_interactive(m).first, fc(0, 0, 0, 0));
  m.erase(FeatureKind::form);
  EXPECT_THROW(aggregate_interactive(m), ContractError);
}

TEST(AggregateMain, MaxAndTies) {
  auto bm = [](long long d, long long t, double r) { return BreakageMetrics{d, t, r}; };
  std::map<MainFeature, BreakageMetrics> m{{MainFeature::page_text, bm(0, 1, 0)},
                                           {MainFeature::stylesheets_loaded, bm(0, 1, 0)},
                                           {MainFeature::interactive, bm(3, 3, 1.0)},
                                           {MainFeature::large_image, bm(0, 0, 0)},
                                           {MainFeature::loader_overlay, bm(0, 0, 0)}};
  auto a = aggregate_main_features(m);
  EXPECT_DOUBLE_EQ(a.metrics.dbrn, 1.0);
  EXPECT_EQ(a.metrics.dbr, 3);
  EXPECT_EQ(a.metrics.tot_nojs, 3);
  EXPECT_EQ(a.attained_by, MainFeature::interactive);

  for (auto& [k, v] : m) v = bm(0, 0, 0);
  EXPECT_EQ(aggregate_main_features(m).metrics, bm(0, 0, 0));
  EXPECT_EQ(aggregate_main_features(m).attained_by, MainFeature::page_text);

  m[MainFeature::large_image] = bm(2, 4, 0.5);
  m[MainFeature::stylesheets_loaded] = bm(1, 2, 0.5);
  auto tie = aggregate_main_features(m);
  EXPECT_EQ(tie.attained_by, MainFeature::stylesheets_loaded);
  EXPECT_EQ(tie.metrics.tot_nojs, 2);
  EXPECT_EQ(tie.metrics.dbr, 2);

  m.erase(MainFeature::loader_overlay);
  EXPECT_THROW(aggregate_main_features(m), ContractError);
}

TEST(PageStatus, Examples) {
  auto zero = fc(0, 0, 0, 0);
  EXPECT_EQ(page_status(zero, fc(0, 0, 0, 0, Scope::whole_page), 0, 0), PageStatus::feature_absent);
  EXPECT_EQ(page_status(fc(2, 0, 0, 0), fc(2, 0, 0, 0, Scope::whole_page), 2, 2), PageStatus::broken_in_main);
  EXPECT_EQ(page_status(fc(0, 0, 1, 0), fc(3, 0, 1, 0, Scope::whole_page), 0, 3), PageStatus::working_main_only);
  EXPECT_EQ(page_status(fc(0, 0, 1, 0), fc(0, 0, 1, 0, Scope::whole_page), 0, 0), PageStatus::working_whole_page);
  EXPECT_THROW(page_status(fc(1, 0, 0, 0), fc(0, 0, 0, 0, Scope::whole_page), 0, 0), ContractError);
}

TEST(PageStatus, NamesRoundTrip) {
  for (auto s : {PageStatus::feature_absent, PageStatus::working_whole_page, PageStatus::working_main_only,
                 PageStatus::broken_in_main})
    EXPECT_EQ(page_status_from_string(to_string(s)), s);
  EXPECT_FALSE(page_status_from_string("x"));
}

// Every consistent small input satisfies exactly one branch condition, and
// scaling all counts by k keeps the status.
TEST(PageStatus, ExhaustiveExclusiveAndScaleInvariant) {
  const int kMax = 2;
  long long cases = 0;
  for (int wbv = 0; wbv <= kMax; ++wbv)
    for (int wbh = 0; wbh <= kMax; ++wbh)
      for (int wwv = 0; wwv <= kMax; ++wwv)
        for (int wwh = 0; wwh <= kMax; ++wwh)
          for (int mbv = 0; mbv <= wbv; ++mbv)
            for (int mbh = 0; mbh <= wbh; ++mbh)
              for (int mwv = 0; mwv <= wwv; ++mwv)
                for (int mwh = 0; mwh <= wwh; ++mwh)
                  for (int dm = -2; dm <= 2; ++dm)
                    for (int dw = -2; dw <= 2; ++dw) {
                      auto whole = fc(wbv, wbh, wwv, wwh, Scope::whole_page);
                      auto main = fc(mbv, mbh, mwv, mwh, Scope::main);
                      bool absent = whole.total() == 0;
                      bool broken = !absent && dm > 0;
                      bool main_only = !absent && dm <= 0 && dw > 0;
                      bool whole_ok = !absent && dm <= 0 && dw <= 0;
                      ASSERT_EQ(absent + broken + main_only + whole_ok, 1);
                      auto s = page_status(main, whole, dm, dw);
                      PageStatus want = absent ? PageStatus::feature_absent
                                        : broken ? PageStatus::broken_in_main
                                        : main_only ? PageStatus::working_main_only
                                                    : PageStatus::working_whole_page;
                      ASSERT_EQ(s, want);
                      for (int k = 2; k <= 4; ++k)
                        ASSERT_EQ(page_status(main.scaled(k), whole.scaled(k), dm * k, dw * k), s);
                      ++cases;
                    }
  EXPECT_GT(cases, 10000);
}

namespace {

std::vector<FeatureVerdict> random_verdicts(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(0, 50), kind(0, 7), coin(0, 1);
  std::vector<FeatureVerdict> out;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    FeatureVerdict v;
    v.kind = kAllFeatures[static_cast<size_t>(kind(rng))];  // element-level kinds
    v.broken = coin(rng);
    v.visible = coin(rng);
    v.in_main = coin(rng);
    out.push_back(v);
  }
  for (auto k : {FeatureKind::page_text, FeatureKind::stylesheets_loaded}) {
    FeatureVerdict v;
    v.kind = k;
    v.broken = coin(rng);
    out.push_back(v);
  }
  return out;
}

struct Recount {
  long long b = 0, t = 0, bv = 0, tv = 0;
};

Recount recount(const std::vector<FeatureVerdict>& vs, const std::vector<FeatureKind>& kinds, bool main_only) {
  Recount r;
  for (const auto& v : vs) {
    if (std::find(kinds.begin(), kinds.end(), v.kind) == kinds.end()) continue;
    if (main_only && !v.in_main) continue;
    r.t += 1;
    r.b += v.broken;
    r.tv += v.visible;
    r.bv += v.broken && v.visible;
  }
  return r;
}

}  // namespace

// 1000 random pages: module output recomputed from the raw verdict lists.
TEST(Metrics, RandomPagesMatchRecount) {
  std::mt19937 rng(424242);
  const std::vector<FeatureKind> interactive(kInteractiveFeatures.begin(), kInteractiveFeatures.end());
  for (int page = 0; page < 1000; ++page) {
    auto plain_v = random_verdicts(rng), nojs_v = random_verdicts(rng);
    auto plain = tally_report(plain_v, Variant::plain, "u");
    auto nojs = tally_report(nojs_v, Variant::nojs, "u");
    auto r = compare_pair(plain, nojs);

    auto check = [&](const FeatureResult& fr, const std::vector<FeatureKind>& kinds) {
      for (bool main_only : {true, false}) {
        auto n = recount(nojs_v, kinds, main_only), p = recount(plain_v, kinds, main_only);
        const auto& m = main_only ? fr.main : fr.whole;
        ASSERT_EQ(m.dbr, n.b - p.b);
        ASSERT_EQ(m.tot_nojs, n.t);
        ASSERT_DOUBLE_EQ(m.dbrn, n.t ? double(n.b - p.b) / double(n.t) : 0.0);
        if (n.t > 0) { ASSERT_LE(m.dbrn, 1.0); }
        if (main_only) {
          ASSERT_EQ(fr.main_visible.dbr, n.bv - p.bv);
          ASSERT_EQ(fr.main_visible.tot_nojs, n.tv);
        }
      }
      auto wn = recount(nojs_v, kinds, false);
      PageStatus want = wn.t == 0                ? PageStatus::feature_absent
                        : fr.main.dbr > 0        ? PageStatus::broken_in_main
                        : fr.whole.dbr > 0       ? PageStatus::working_main_only
                                                 : PageStatus::working_whole_page;
      ASSERT_EQ(fr.status, want);
    };
    for (auto k : kAllFeatures) check(r.features.at(k), {k});
    check(r.interactive, interactive);

    // Main-features aggregate: max over the five members.
    std::vector<std::vector<FeatureKind>> members = {
        {FeatureKind::page_text}, {FeatureKind::stylesheets_loaded}, interactive, {FeatureKind::large_image},
        {FeatureKind::loader_overlay}};
    for (bool main_only : {true, false}) {
      long long best_dbr = LLONG_MIN;
      double best_dbrn = -1e9;
      for (const auto& m : members) {
        auto n = recount(nojs_v, m, main_only), p = recount(plain_v, m, main_only);
        best_dbr = std::max(best_dbr, n.b - p.b);
        best_dbrn = std::max(best_dbrn, n.t ? double(n.b - p.b) / double(n.t) : 0.0);
      }
      const auto& agg = main_only ? r.main_features.main : r.main_features.whole;
      ASSERT_EQ(agg.metrics.dbr, best_dbr);
      ASSERT_DOUBLE_EQ(agg.metrics.dbrn, best_dbrn);
    }
    PageStatus want = r.main_features.main.metrics.dbr > 0    ? PageStatus::broken_in_main
                      : r.main_features.whole.metrics.dbr > 0 ? PageStatus::working_main_only
                                                              : PageStatus::working_whole_page;
    ASSERT_EQ(r.main_features_status(), want);
  }
}
