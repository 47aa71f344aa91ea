#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "random_tables.hpp"
#include "tabscore/e2e_metrics.hpp"
#include "tabscore/errors.hpp"
#include "tabscore/structure_metrics.hpp"

using namespace tabscore;

namespace {

const char* kTwoByTwo = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>";

Prediction predicted(BBox b, const std::string& markup, double conf) {
  Prediction p;
  p.bbox = b;
  p.markup = markup;
  if (!markup.empty()) p.table = parse_table_markup(markup);
  p.confidence = conf;
  return p;
}

GroundTruth truth(BBox b, const char* markup = kTwoByTwo) { return GroundTruth{b, parse_table_markup(markup)}; }

ScoredPair scored(double j, double s) { return ScoredPair{MatchPair{0, 0, j}, s}; }

std::vector<Page> random_pages(std::mt19937_64& rng, int n_pages) {
  const std::vector<std::string> alphabet{"a", "b", "ab"};
  std::vector<Page> pages;
  for (int p = 0; p < n_pages; ++p) {
    Page page;
    page.id = std::to_string(p);
    const int ng = testing::uniform_int(rng, 0, 3);
    for (int g = 0; g < ng; ++g) {
      const double x = g * 40.0;
      page.ground_truth.push_back(GroundTruth{BBox{x, 0, x + 30, 30}, testing::random_table(rng, 3, 3, alphabet, 0.2)});
    }
    const int np = testing::uniform_int(rng, 0, 4);
    for (int i = 0; i < np; ++i) {
      const double x = testing::uniform_int(rng, 0, 12) * 10.0 + testing::uniform_int(rng, -5, 5);
      Prediction pr;
      pr.bbox = BBox{x, 0, x + 30, 30.0 + testing::uniform_int(rng, -8, 8)};
      pr.table = testing::random_table(rng, 3, 3, alphabet, 0.2);
      pr.confidence = testing::uniform_int(rng, 0, 10) / 10.0;
      page.predictions.push_back(std::move(pr));
    }
    pages.push_back(std::move(page));
  }
  return pages;
}

// From-scratch curve: every threshold re-matches every page.
std::vector<TePoint> brute_te_curve(const std::vector<Page>& pages, double theta_j, TsrMetric metric) {
  std::set<double, std::greater<>> levels;
  for (const auto& p : pages) {
    for (const auto& pr : p.predictions) levels.insert(pr.confidence);
  }
  std::vector<TePoint> curve{{1.0, 1.0, 0.0, 0.0}};
  for (double v : levels) {
    double weighted = 0.0;
    std::size_t tp = 0;
    std::size_t positives = 0;
    std::size_t gts = 0;
    for (const auto& page : pages) {
      std::vector<Prediction> pos;
      for (const auto& pr : page.predictions) {
        if (pr.confidence >= v) pos.push_back(pr);
      }
      const MatchSet ms = match(pos, page.ground_truth, MatchMode::bbox, theta_j);
      positives += pos.size();
      gts += page.ground_truth.size();
      tp += ms.true_positives();
      for (const auto& pair : ms.pairs) weighted += tsr_score(metric, pos[pair.prediction], page.ground_truth[pair.ground_truth]);
    }
    const PRF w = prf_from_counts(weighted, positives, gts);
    const PRF d = prf_from_counts(static_cast<double>(tp), positives, gts);
    curve.push_back({v, w.precision, w.recall, d.recall});
  }
  return curve;
}

}  // namespace

TEST_CASE("metric names") {
  for (TsrMetric m : kAllTsrMetrics) CHECK(parse_tsr_metric(to_string(m)) == m);
  CHECK_THROWS_AS(parse_tsr_metric("grits"), InputError);
}

TEST_CASE("TSR given TD is the mean over matched pairs") {
  const std::vector<ScoredPair> pairs{scored(0.9, 1.0), scored(0.7, 0.5)};
  CHECK(tsr_given_td(pairs) == 0.75);
  CHECK_FALSE(tsr_given_td(std::vector<ScoredPair>{}).has_value());
}

TEST_CASE("structure-weighted precision and recall") {
  // one TP with s = 0.8, one FP, two ground truths
  const std::vector<ScoredPair> pairs{scored(0.9, 0.8)};
  const PRF v = te_precision_recall(pairs, 2, 2, 0.5);
  CHECK(v.precision == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(v.recall == doctest::Approx(0.4).epsilon(1e-15));

  // a pair whose J does not exceed the threshold contributes nothing
  const std::vector<ScoredPair> weak{scored(0.5, 1.0)};
  CHECK(te_precision_recall(weak, 1, 1, 0.5).precision == 0.0);
  CHECK(te_precision_recall(std::vector<ScoredPair>{}, 0, 0, 0.5).precision == 1.0);
}

TEST_CASE("tsr_score dispatch and missing tables") {
  const Prediction same = predicted({0, 0, 10, 10}, kTwoByTwo, 1.0);
  const GroundTruth gt = truth({0, 0, 10, 10});
  for (TsrMetric m : kAllTsrMetrics) CHECK(tsr_score(m, same, gt) == 1.0);
  Prediction broken;
  broken.bbox = BBox{0, 0, 10, 10};
  broken.markup = "<table><tr><td>";
  for (TsrMetric m : kAllTsrMetrics) CHECK(tsr_score(m, broken, gt) == 0.0);

  const Prediction other = predicted({0, 0, 10, 10}, "<table><tr><td>a</td><td>b</td></tr></table>", 1.0);
  CHECK(tsr_score(TsrMetric::teds, other, gt) == doctest::Approx(teds(*other.table, gt.table)));
  CHECK(tsr_score(TsrMetric::topology, other, gt) == doctest::Approx(grits_topology(*other.table, gt.table)));
  CHECK(tsr_score(TsrMetric::content, other, gt) == doctest::Approx(grits_content(*other.table, gt.table)));
}

TEST_CASE("score_pairs keeps matching indices") {
  const std::vector<Prediction> preds{predicted({100, 0, 110, 10}, kTwoByTwo, 0.9),
                                      predicted({0, 0, 10, 10}, "<table><tr><td>a</td></tr></table>", 0.8)};
  const std::vector<GroundTruth> gts{truth({0, 0, 10, 10}), truth({100, 0, 110, 10})};
  const MatchSet ms = match(preds, gts, MatchMode::bbox, 0.5);
  const auto pairs = score_pairs(ms, preds, gts, TsrMetric::teds);
  REQUIRE(pairs.size() == 2);
  for (const auto& p : pairs) {
    CHECK(p.tsr == doctest::Approx(teds(*preds[p.pair.prediction].table, gts[p.pair.ground_truth].table)));
  }
}

TEST_CASE("TE AP of a perfect detector scales with the structure score") {
  // predicted tables keep the box but lose one of four cells' content entirely
  Page page;
  page.id = "p";
  page.ground_truth = {truth({0, 0, 10, 10}, "<table><tr><td>a</td><td>b</td></tr></table>")};
  page.predictions = {predicted({0, 0, 10, 10}, "<table><tr><td>a</td><td>z</td></tr></table>", 0.9)};
  const std::vector<Page> pages{page};
  const double s = grits_content(*page.predictions[0].table, page.ground_truth[0].table);
  CHECK(s == 0.5);
  CHECK(te_ap(pages, MatchMode::bbox, 0.5, TsrMetric::content) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(te_ap(pages, MatchMode::bbox, 0.5, TsrMetric::topology) == 1.0);
}

TEST_CASE("TE AP with no detections is 0") {
  Page page;
  page.id = "p";
  page.ground_truth = {truth({0, 0, 10, 10})};
  const std::vector<Page> pages{page};
  for (TsrMetric m : kAllTsrMetrics) CHECK(te_ap(pages, MatchMode::bbox, 0.5, m) == 0.0);
}

TEST_CASE("te_curve equals a from-scratch oracle") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 60; ++k) {
    const auto pages = random_pages(rng, 4);
    for (TsrMetric m : kAllTsrMetrics) {
      const auto fast = te_curve(pages, MatchMode::bbox, 0.5, m);
      const auto slow = brute_te_curve(pages, 0.5, m);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(fast[i].theta_c == slow[i].theta_c);
        CHECK(fast[i].precision == doctest::Approx(slow[i].precision).epsilon(1e-12));
        CHECK(fast[i].recall == doctest::Approx(slow[i].recall).epsilon(1e-12));
        CHECK(fast[i].detection_recall == doctest::Approx(slow[i].detection_recall).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("structure-weighted scores never exceed detection scores") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 60; ++k) {
    const auto pages = random_pages(rng, 5);
    const auto pr = pr_curve(pages, MatchMode::bbox, 0.5);
    const double ap = average_precision(pr);
    for (TsrMetric m : kAllTsrMetrics) {
      const auto te = te_curve(pages, MatchMode::bbox, 0.5, m);
      REQUIRE(te.size() == pr.size());
      for (std::size_t i = 1; i < te.size(); ++i) {
        CHECK(te[i].precision <= pr[i].precision + 1e-12);
        CHECK(te[i].recall <= pr[i].recall + 1e-12);
        CHECK(te[i].detection_recall == doctest::Approx(pr[i].recall).epsilon(1e-12));
      }
      const double te_value = te_average_precision(te);
      CHECK(te_value >= 0.0);
      CHECK(te_value <= ap + 1e-12);
    }
  }
}

TEST_CASE("fixed thresholds use strict comparison") {
  Page page;
  page.id = "p";
  page.ground_truth = {truth({0, 0, 10, 10})};
  page.predictions = {predicted({0, 0, 10, 10}, kTwoByTwo, 0.5)};
  const std::vector<Page> pages{page};
  const std::vector<double> levels{0.5, 0.4};
  const auto curve = te_curve(pages, MatchMode::bbox, 0.5, TsrMetric::teds, levels);
  REQUIRE(curve.size() == 3);
  CHECK(curve[1].theta_c == 0.5);
  CHECK(curve[1].detection_recall == 0.0);
  CHECK(curve[2].theta_c == 0.4);
  CHECK(curve[2].recall == 1.0);
}

TEST_CASE("te_ap agrees with the TE curve step sum") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 40; ++k) {
    const auto pages = random_pages(rng, 4);
    for (TsrMetric m : kAllTsrMetrics) {
      CHECK(te_ap(pages, MatchMode::bbox, 0.5, m) ==
            doctest::Approx(te_average_precision(te_curve(pages, MatchMode::bbox, 0.5, m))).epsilon(1e-14));
    }
  }
}

TEST_CASE("corrupting one matched table strictly lowers the TEDS-weighted scores") {
  const std::vector<Prediction> clean{predicted({0, 0, 10, 10}, kTwoByTwo, 0.9),
                                      predicted({100, 0, 110, 10}, kTwoByTwo, 0.8)};
  const std::vector<GroundTruth> gts{truth({0, 0, 10, 10}), truth({100, 0, 110, 10})};
  std::vector<Prediction> dirty = clean;
  dirty[1] = predicted({100, 0, 110, 10},
                       "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>dd</td></tr></table>", 0.8);
  auto scores = [&](const std::vector<Prediction>& preds) {
    const MatchSet ms = match(preds, gts, MatchMode::bbox, 0.5);
    return te_precision_recall(score_pairs(ms, preds, gts, TsrMetric::teds), preds.size(), gts.size(), 0.5);
  };
  const PRF a = scores(clean);
  const PRF b = scores(dirty);
  CHECK(a.precision == 1.0);
  CHECK(b.precision < a.precision);
  CHECK(b.recall < a.recall);
}
