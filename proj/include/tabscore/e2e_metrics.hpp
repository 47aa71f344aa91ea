#pragma once

// End-to-end table extraction scores: structure quality over detected
// tables (TSR|TD) and structure-weighted precision, recall and AP.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tabscore/detection_metrics.hpp"
#include "tabscore/matching.hpp"

namespace tabscore {

enum class TsrMetric { topology, content, teds };

inline constexpr TsrMetric kAllTsrMetrics[] = {TsrMetric::topology, TsrMetric::content, TsrMetric::teds};

std::string_view to_string(TsrMetric metric);

/// Parses "topology", "content" or "teds"; throws InputError otherwise.
TsrMetric parse_tsr_metric(std::string_view name);

/// Structure score of a prediction against its ground truth; 0 when the
/// prediction carries no parsable table.
double tsr_score(TsrMetric metric, const Prediction& prediction, const GroundTruth& truth);
double tsr_score(TsrMetric metric, const TableGrid& predicted, const TableGrid& truth);

struct ScoredPair {
  MatchPair pair;
  double tsr = 0.0;
};

std::vector<ScoredPair> score_pairs(const MatchSet& matches, std::span<const Prediction> predictions,
                                    std::span<const GroundTruth> truths, TsrMetric metric);

/// Mean structure score over the matched pairs; nullopt when there are none.
std::optional<double> tsr_given_td(std::span<const ScoredPair> pairs);

/// P = sum(s * 1[J > theta_j]) / positives, R = same sum / ground truths,
/// with the empty-set conventions of prf_from_counts.
PRF te_precision_recall(std::span<const ScoredPair> pairs, std::size_t positives, std::size_t ground_truths,
                        double theta_j = 0.5);

/// One point of the structure-weighted confidence sweep. `detection_recall`
/// is the unweighted recall at the same threshold.
struct TePoint {
  double theta_c = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double detection_recall = 0.0;
};

/// Structure-weighted curve over the confidence sweep, preceded by the
/// (recall 0, precision 1) anchor.
std::vector<TePoint> te_curve(std::span<const Page> pages, MatchMode mode, double theta_j, TsrMetric metric,
                              std::span<const double> fixed_thresholds = {});

/// Confidence sweep whose weighted true positives are structure scores.
std::vector<SweepPoint> te_sweep(std::span<const Page> pages, MatchMode mode, double theta_j, TsrMetric metric,
                                 std::span<const double> fixed_thresholds = {});
std::vector<TePoint> te_curve(std::span<const SweepPoint> sweep);

/// Step sum of (R_k - R_{k-1}) * P^TSR_k where R is the detection recall, so
/// a uniform structure score s scales AP by s.
double te_average_precision(std::span<const TePoint> curve);

double te_ap(std::span<const Page> pages, MatchMode mode, double theta_j, TsrMetric metric,
             std::span<const double> fixed_thresholds = {});

}  // namespace tabscore
