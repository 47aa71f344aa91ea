#pragma once

// Table-detection scores: thresholded P/R/F1, WAvg(F1), expected metrics
// under a random IoU threshold, precision-recall curves, average precision
// and detection calibration error.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tabscore/matching.hpp"

namespace tabscore {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Harmonic mean, 0 when p + r = 0.
double f1_score(double precision, double recall);

/// Precision and recall from counts. A page with neither predictions nor
/// ground truth scores P = R = 1; precision is 0 when there are no
/// positives but some ground truth; recall is 0 when there is no ground
/// truth but some positives.
PRF prf_from_counts(double true_positives, std::size_t positives, std::size_t ground_truths);

PRF prf_at(const MatchSet& matches);

/// IoU thresholds of the ICDAR 2019 weighted F1.
inline constexpr std::array<double, 4> kWavgThresholds{0.6, 0.7, 0.8, 0.9};

/// Sum of theta * F1(theta) over sum of theta, for F1 at kWavgThresholds.
double wavg_f1(const std::array<double, 4>& f1_at_thresholds);

/// Density f_s(theta) = alpha_s * theta on [s, 1] of the random IoU
/// threshold; alpha_s = 2 / (1 - s^2), so alpha_0 = 2 and alpha_0.5 = 8/3.
class ThresholdDensity {
 public:
  /// Requires 0 <= s < 1.
  explicit ThresholdDensity(double s);

  double s() const { return s_; }
  double alpha() const { return 2.0 / (1.0 - s_ * s_); }
  double pdf(double theta) const;
  double cdf(double theta) const;

 private:
  double s_;
};

/// E[1[J > theta]] for theta ~ f_s, i.e. (J^2 - s^2) / (1 - s^2) when
/// J > s, else 0. Gives J^2 for s = 0 and (4/3)(J^2 - 1/4) for s = 0.5.
double expected_indicator(double jaccard, const ThresholdDensity& density);

/// Expected precision and recall over a fixed positive set, one Jaccard
/// value per positive (0 for unmatched positives). F1 is the harmonic mean
/// of the two expectations. Empty-set conventions follow prf_from_counts.
PRF expected_prf(std::span<const double> jaccards, std::size_t ground_truths, const ThresholdDensity& density);

/// Per-positive Jaccard values from a match computed at theta_j = 0; one
/// entry per positive prediction, in prediction order.
std::vector<double> positive_jaccards(const MatchSet& matches_at_zero);

struct PRPoint {
  double theta_c = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Pooled counts at one confidence threshold; positives are the
/// predictions with confidence >= theta_c.
struct SweepPoint {
  double theta_c = 0.0;
  std::size_t positives = 0;
  std::size_t ground_truths = 0;
  std::size_t true_positives = 0;
  /// Sum of the pair weight over matched pairs.
  double weighted_true_positives = 0.0;
};

/// Weight of a matched pair, given page index, prediction index and ground
/// truth index.
using PairWeight = std::function<double(std::size_t, std::size_t, std::size_t)>;

/// Sweeps the confidence threshold over the distinct confidence values in
/// descending order, re-matching each page whose positive set changes and
/// pooling counts across pages. With `fixed_thresholds`, evaluates those
/// levels instead (descending, positives strictly above each level).
std::vector<SweepPoint> confidence_sweep(std::span<const Page> pages, MatchMode mode, double theta_j,
                                         const PairWeight& weight = {},
                                         std::span<const double> fixed_thresholds = {});

/// Precision-recall curve over the confidence sweep, preceded by the
/// (recall 0, precision 1) anchor.
std::vector<PRPoint> pr_curve(std::span<const Page> pages, MatchMode mode, double theta_j,
                              std::span<const double> fixed_thresholds = {});

/// Curve of an already computed sweep.
std::vector<PRPoint> pr_curve(std::span<const SweepPoint> sweep);

/// Step sum of (R_k - R_{k-1}) * P_k in curve order, starting from recall 0.
double average_precision(std::span<const PRPoint> curve);

/// The same step sum evaluated from the pooled counts in extended precision,
/// so rational cases such as 5/6 come out correctly rounded. With `weighted`,
/// precision uses the weighted true positives while recall stays unweighted.
double average_precision(std::span<const SweepPoint> sweep, bool weighted = false);

struct CalibrationSample {
  double confidence = 0.0;
  bool true_positive = false;
};

struct ReliabilityBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double mean_conf = 0.0;
  double precision = 0.0;
};

struct CalibrationResult {
  double d_ece = 0.0;
  std::vector<ReliabilityBin> bins;
};

/// Index of the bin (lo, hi] holding `confidence` among `bins` equal bins of
/// [0, 1]; confidence 0 falls in the first bin.
std::size_t calibration_bin(double confidence, int bins);

/// Detection ECE: sum over bins of |B_m| / n * |prec(B_m) - conf(B_m)| with
/// n the number of samples. Requires bins >= 1.
CalibrationResult d_ece(std::span<const CalibrationSample> samples, int bins = 10);

/// One sample per prediction of every page (no confidence filtering), true
/// positive when matched at theta_j.
std::vector<CalibrationSample> calibration_samples(std::span<const Page> pages, MatchMode mode, double theta_j);

}  // namespace tabscore
