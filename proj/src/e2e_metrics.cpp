#include "tabscore/e2e_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tabscore/errors.hpp"
#include "tabscore/structure_metrics.hpp"

namespace tabscore {

std::string_view to_string(TsrMetric metric) {
  switch (metric) {
    case TsrMetric::topology:
      return "topology";
    case TsrMetric::content:
      return "content";
    case TsrMetric::teds:
      return "teds";
  }
  return "unknown";
}

TsrMetric parse_tsr_metric(std::string_view name) {
  if (name == "topology") return TsrMetric::topology;
  if (name == "content") return TsrMetric::content;
  if (name == "teds") return TsrMetric::teds;
  throw InputError("unknown TSR metric '" + std::string(name) + "' (expected topology, content or teds)");
}

double tsr_score(TsrMetric metric, const TableGrid& predicted, const TableGrid& truth) {
  switch (metric) {
    case TsrMetric::topology:
      return grits_topology(predicted, truth);
    case TsrMetric::content:
      return grits_content(predicted, truth);
    case TsrMetric::teds:
      return teds(predicted, truth);
  }
  return 0.0;
}

double tsr_score(TsrMetric metric, const Prediction& prediction, const GroundTruth& truth) {
  if (!prediction.table) return 0.0;
  return tsr_score(metric, *prediction.table, truth.table);
}

std::vector<ScoredPair> score_pairs(const MatchSet& matches, std::span<const Prediction> predictions,
                                    std::span<const GroundTruth> truths, TsrMetric metric) {
  std::vector<ScoredPair> out;
  out.reserve(matches.pairs.size());
  for (const auto& pair : matches.pairs) {
    out.push_back(ScoredPair{pair, tsr_score(metric, predictions[pair.prediction], truths[pair.ground_truth])});
  }
  return out;
}

std::optional<double> tsr_given_td(std::span<const ScoredPair> pairs) {
  if (pairs.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.tsr;
  return sum / static_cast<double>(pairs.size());
}

PRF te_precision_recall(std::span<const ScoredPair> pairs, std::size_t positives, std::size_t ground_truths,
                        double theta_j) {
  double sum = 0.0;
  for (const auto& p : pairs) {
    if (p.pair.jaccard > theta_j) sum += p.tsr;
  }
  return prf_from_counts(sum, positives, ground_truths);
}

std::vector<SweepPoint> te_sweep(std::span<const Page> pages, MatchMode mode, double theta_j, TsrMetric metric,
                                 std::span<const double> fixed_thresholds) {
  // structure scores are computed lazily, once per (page, prediction, truth)
  std::vector<std::vector<double>> cache(pages.size());
  for (std::size_t p = 0; p < pages.size(); ++p) {
    cache[p].assign(pages[p].predictions.size() * pages[p].ground_truth.size(),
                    std::numeric_limits<double>::quiet_NaN());
  }
  PairWeight weight = [&](std::size_t page, std::size_t pred, std::size_t gt) {
    double& slot = cache[page][pred * pages[page].ground_truth.size() + gt];
    if (std::isnan(slot)) slot = tsr_score(metric, pages[page].predictions[pred], pages[page].ground_truth[gt]);
    return slot;
  };
  return confidence_sweep(pages, mode, theta_j, weight, fixed_thresholds);
}

std::vector<TePoint> te_curve(std::span<const SweepPoint> sweep) {
  std::vector<TePoint> curve{TePoint{1.0, 1.0, 0.0, 0.0}};
  for (const auto& s : sweep) {
    const PRF weighted = prf_from_counts(s.weighted_true_positives, s.positives, s.ground_truths);
    const PRF plain = prf_from_counts(static_cast<double>(s.true_positives), s.positives, s.ground_truths);
    curve.push_back(TePoint{s.theta_c, weighted.precision, weighted.recall, plain.recall});
  }
  return curve;
}

std::vector<TePoint> te_curve(std::span<const Page> pages, MatchMode mode, double theta_j, TsrMetric metric,
                              std::span<const double> fixed_thresholds) {
  return te_curve(te_sweep(pages, mode, theta_j, metric, fixed_thresholds));
}

double te_average_precision(std::span<const TePoint> curve) {
  double ap = 0.0;
  double previous_recall = 0.0;
  for (const auto& point : curve) {
    ap += (point.detection_recall - previous_recall) * point.precision;
    previous_recall = point.detection_recall;
  }
  return std::clamp(ap, 0.0, 1.0);
}

double te_ap(std::span<const Page> pages, MatchMode mode, double theta_j, TsrMetric metric,
             std::span<const double> fixed_thresholds) {
  return average_precision(te_sweep(pages, mode, theta_j, metric, fixed_thresholds), true);
}

}  // namespace tabscore
