#include "tabscore/detection_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "tabscore/errors.hpp"

namespace tabscore {

namespace {

// Neumaier summation; keeps means of repeated values exact to the last ulp.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double f1_score(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

PRF prf_from_counts(double true_positives, std::size_t positives, std::size_t ground_truths) {
  PRF out;
  if (positives == 0) {
    out.precision = ground_truths == 0 ? 1.0 : 0.0;
  } else {
    out.precision = true_positives / static_cast<double>(positives);
  }
  if (ground_truths == 0) {
    out.recall = positives == 0 ? 1.0 : 0.0;
  } else {
    out.recall = true_positives / static_cast<double>(ground_truths);
  }
  out.f1 = f1_score(out.precision, out.recall);
  return out;
}

PRF prf_at(const MatchSet& matches) {
  return prf_from_counts(static_cast<double>(matches.true_positives()), matches.positive_count(),
                         matches.ground_truth_count);
}

double wavg_f1(const std::array<double, 4>& f1_at_thresholds) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < kWavgThresholds.size(); ++i) {
    num += kWavgThresholds[i] * f1_at_thresholds[i];
    den += kWavgThresholds[i];
  }
  return num / den;
}

ThresholdDensity::ThresholdDensity(double s) : s_(s) {
  if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("density lower bound must lie in [0, 1)");
}

double ThresholdDensity::pdf(double theta) const {
  if (theta < s_ || theta > 1.0) return 0.0;
  return alpha() * theta;
}

double ThresholdDensity::cdf(double theta) const {
  if (theta <= s_) return 0.0;
  if (theta >= 1.0) return 1.0;
  return (theta * theta - s_ * s_) / (1.0 - s_ * s_);
}

double expected_indicator(double jaccard, const ThresholdDensity& density) {
  // P[theta < J] under f_s
  return density.cdf(std::clamp(jaccard, 0.0, 1.0));
}

PRF expected_prf(std::span<const double> jaccards, std::size_t ground_truths, const ThresholdDensity& density) {
  CompensatedSum total;
  for (double j : jaccards) total.add(expected_indicator(j, density));
  return prf_from_counts(total.value(), jaccards.size(), ground_truths);
}

std::vector<double> positive_jaccards(const MatchSet& matches_at_zero) {
  std::vector<std::pair<std::size_t, double>> indexed;
  for (const auto& p : matches_at_zero.pairs) indexed.emplace_back(p.prediction, p.jaccard);
  for (std::size_t fp : matches_at_zero.false_positives) indexed.emplace_back(fp, 0.0);
  std::sort(indexed.begin(), indexed.end());
  std::vector<double> out;
  out.reserve(indexed.size());
  for (const auto& [index, j] : indexed) out.push_back(j);
  return out;
}

namespace {

double pair_weight_sum(const MatchSet& ms, std::size_t page, const PairWeight& weight) {
  if (!weight) return static_cast<double>(ms.true_positives());
  CompensatedSum w;
  for (const auto& pair : ms.pairs) w.add(weight(page, pair.prediction, pair.ground_truth));
  return w.value();
}

std::vector<SweepPoint> fixed_sweep(std::span<const Page> pages, MatchMode mode, double theta_j,
                                    const PairWeight& weight, std::span<const double> thresholds) {
  std::vector<double> levels(thresholds.begin(), thresholds.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<GridMatrix<double>> similarities;
  std::size_t ground_truths = 0;
  for (const auto& page : pages) {
    ground_truths += page.ground_truth.size();
    similarities.push_back(similarity_matrix(page.predictions, page.ground_truth, mode));
  }
  std::vector<SweepPoint> out;
  for (double level : levels) {
    SweepPoint point{level, 0, ground_truths, 0, 0.0};
    CompensatedSum weighted;
    for (std::size_t p = 0; p < pages.size(); ++p) {
      const auto subset = threshold_positives(pages[p].predictions, level);
      const MatchSet ms = match_subset(pages[p].predictions, subset, similarities[p], theta_j);
      point.positives += subset.size();
      point.true_positives += ms.true_positives();
      weighted.add(pair_weight_sum(ms, p, weight));
    }
    point.weighted_true_positives = weighted.value();
    out.push_back(point);
  }
  return out;
}

}  // namespace

std::vector<SweepPoint> confidence_sweep(std::span<const Page> pages, MatchMode mode, double theta_j,
                                         const PairWeight& weight, std::span<const double> fixed_thresholds) {
  if (!fixed_thresholds.empty()) return fixed_sweep(pages, mode, theta_j, weight, fixed_thresholds);
  struct Entry {
    double confidence;
    std::size_t page;
    std::size_t prediction;
  };
  std::vector<Entry> entries;
  std::size_t ground_truths = 0;
  std::vector<GridMatrix<double>> similarities;
  similarities.reserve(pages.size());
  for (std::size_t p = 0; p < pages.size(); ++p) {
    ground_truths += pages[p].ground_truth.size();
    for (std::size_t i = 0; i < pages[p].predictions.size(); ++i) {
      entries.push_back({pages[p].predictions[i].confidence, p, i});
    }
    similarities.push_back(similarity_matrix(pages[p].predictions, pages[p].ground_truth, mode));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tuple(-a.confidence, a.page, a.prediction) < std::tuple(-b.confidence, b.page, b.prediction);
  });

  std::vector<std::vector<std::size_t>> included(pages.size());
  std::vector<std::size_t> page_tp(pages.size(), 0);
  std::vector<double> page_weighted(pages.size(), 0.0);
  std::size_t positives = 0;
  std::size_t tp_total = 0;

  std::vector<SweepPoint> out;
  std::size_t k = 0;
  while (k < entries.size()) {
    const double value = entries[k].confidence;
    std::vector<std::size_t> touched;
    for (; k < entries.size() && entries[k].confidence == value; ++k) {
      auto& inc = included[entries[k].page];
      inc.insert(std::lower_bound(inc.begin(), inc.end(), entries[k].prediction), entries[k].prediction);
      touched.push_back(entries[k].page);
      ++positives;
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t p : touched) {
      const MatchSet ms = match_subset(pages[p].predictions, included[p], similarities[p], theta_j);
      tp_total -= page_tp[p];
      page_tp[p] = ms.true_positives();
      tp_total += page_tp[p];
      page_weighted[p] = pair_weight_sum(ms, p, weight);
    }
    CompensatedSum weighted;
    for (double w : page_weighted) weighted.add(w);
    out.push_back(SweepPoint{value, positives, ground_truths, tp_total, weighted.value()});
  }
  return out;
}

std::vector<PRPoint> pr_curve(std::span<const SweepPoint> sweep) {
  std::vector<PRPoint> curve{PRPoint{1.0, 1.0, 0.0}};
  for (const auto& s : sweep) {
    const PRF prf = prf_from_counts(static_cast<double>(s.true_positives), s.positives, s.ground_truths);
    curve.push_back(PRPoint{s.theta_c, prf.precision, prf.recall});
  }
  return curve;
}

std::vector<PRPoint> pr_curve(std::span<const Page> pages, MatchMode mode, double theta_j,
                              std::span<const double> fixed_thresholds) {
  return pr_curve(confidence_sweep(pages, mode, theta_j, {}, fixed_thresholds));
}

double average_precision(std::span<const PRPoint> curve) {
  double ap = 0.0;
  double previous_recall = 0.0;
  for (const auto& point : curve) {
    ap += (point.recall - previous_recall) * point.precision;
    previous_recall = point.recall;
  }
  return std::clamp(ap, 0.0, 1.0);
}

double average_precision(std::span<const SweepPoint> sweep, bool weighted) {
  using Wide = long double;
  // prf_from_counts conventions, in wide arithmetic
  auto precision = [](Wide tp, std::size_t pos, std::size_t gts) -> Wide {
    if (pos == 0) return gts == 0 ? 1 : 0;
    return tp / static_cast<Wide>(pos);
  };
  auto recall = [](Wide tp, std::size_t pos, std::size_t gts) -> Wide {
    if (gts == 0) return pos == 0 ? 1 : 0;
    return tp / static_cast<Wide>(gts);
  };
  Wide ap = 0;
  Wide previous_recall = 0;
  for (const auto& s : sweep) {
    const Wide tp = static_cast<Wide>(s.true_positives);
    const Wide r = recall(tp, s.positives, s.ground_truths);
    const Wide p = precision(weighted ? static_cast<Wide>(s.weighted_true_positives) : tp, s.positives,
                             s.ground_truths);
    ap += (r - previous_recall) * p;
    previous_recall = r;
  }
  return std::clamp(static_cast<double>(ap), 0.0, 1.0);
}

std::size_t calibration_bin(double confidence, int bins) {
  const double c = std::clamp(confidence, 0.0, 1.0);
  long m = static_cast<long>(std::ceil(c * bins));
  m = std::clamp(m, 1L, static_cast<long>(bins));
  if (m > 1 && c <= static_cast<double>(m - 1) / bins) --m;
  if (m < bins && c > static_cast<double>(m) / bins) ++m;
  return static_cast<std::size_t>(m - 1);
}

CalibrationResult d_ece(std::span<const CalibrationSample> samples, int bins) {
  if (bins < 1) throw std::invalid_argument("D-ECE needs at least one bin");
  std::vector<CalibrationSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(), [](const CalibrationSample& a, const CalibrationSample& b) {
    return std::tuple(a.confidence, a.true_positive) < std::tuple(b.confidence, b.true_positive);
  });

  std::vector<CompensatedSum> conf_sum(bins);
  std::vector<std::size_t> tp(bins, 0);
  CalibrationResult out;
  out.bins.resize(bins);
  for (int m = 0; m < bins; ++m) {
    out.bins[m].lo = static_cast<double>(m) / bins;
    out.bins[m].hi = static_cast<double>(m + 1) / bins;
  }
  for (const auto& s : sorted) {
    const std::size_t b = calibration_bin(s.confidence, bins);
    ++out.bins[b].count;
    conf_sum[b].add(s.confidence);
    if (s.true_positive) ++tp[b];
  }
  const double n = static_cast<double>(sorted.size());
  CompensatedSum total;
  for (int m = 0; m < bins; ++m) {
    auto& bin = out.bins[m];
    if (bin.count == 0) continue;
    const double count = static_cast<double>(bin.count);
    bin.mean_conf = conf_sum[m].value() / count;
    bin.precision = static_cast<double>(tp[m]) / count;
    // |B|/n * |prec - conf| == |tp - sum conf| / n, with fewer roundings
    total.add(std::abs(static_cast<double>(tp[m]) - conf_sum[m].value()));
  }
  out.d_ece = n > 0 ? total.value() / n : 0.0;
  return out;
}

std::vector<CalibrationSample> calibration_samples(std::span<const Page> pages, MatchMode mode, double theta_j) {
  std::vector<CalibrationSample> out;
  for (const auto& page : pages) {
    const MatchSet ms = match(page.predictions, page.ground_truth, mode, theta_j);
    std::vector<char> is_tp(page.predictions.size(), 0);
    for (const auto& p : ms.pairs) is_tp[p.prediction] = 1;
    for (std::size_t i = 0; i < page.predictions.size(); ++i) {
      out.push_back(CalibrationSample{page.predictions[i].confidence, is_tp[i] != 0});
    }
  }
  return out;
}

}  // namespace tabscore
