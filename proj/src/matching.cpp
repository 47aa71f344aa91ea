#include "tabscore/matching.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "tabscore/errors.hpp"
#include "tabscore/text.hpp"

namespace tabscore {

std::vector<std::size_t> threshold_positives(std::span<const Prediction> predictions, double theta_c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].confidence > theta_c) out.push_back(i);
  }
  return out;
}

std::vector<Prediction> select(std::span<const Prediction> predictions, std::span<const std::size_t> indices) {
  std::vector<Prediction> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(predictions[i]);
  return out;
}

std::vector<std::pair<std::u32string, std::u32string>> content_chunk_pairs(const TableGrid& table) {
  std::u32string stream;
  for (const auto& cell : table.cells()) stream += text::strip_whitespace(text::decode_utf8(cell.content));
  std::vector<std::u32string> chunks;
  for (std::size_t i = 0; i < stream.size(); i += 2) chunks.push_back(stream.substr(i, 2));
  std::vector<std::pair<std::u32string, std::u32string>> pairs;
  for (std::size_t i = 0; i + 1 < chunks.size(); ++i) pairs.emplace_back(chunks[i], chunks[i + 1]);
  return pairs;
}

namespace {

using ChunkPair = std::pair<std::u32string, std::u32string>;

std::map<ChunkPair, std::size_t> multiset(const TableGrid& table) {
  std::map<ChunkPair, std::size_t> counts;
  for (auto& p : content_chunk_pairs(table)) ++counts[std::move(p)];
  return counts;
}

}  // namespace

double content_jaccard(const TableGrid& a, const TableGrid& b) {
  const auto sa = multiset(a);
  const auto sb = multiset(b);
  if (sa.empty() && sb.empty()) return 1.0;
  if (sa.empty() || sb.empty()) return 0.0;
  std::size_t inter = 0;
  std::size_t uni = 0;
  auto ia = sa.begin();
  auto ib = sb.begin();
  while (ia != sa.end() || ib != sb.end()) {
    if (ib == sb.end() || (ia != sa.end() && ia->first < ib->first)) {
      uni += ia->second;
      ++ia;
    } else if (ia == sa.end() || ib->first < ia->first) {
      uni += ib->second;
      ++ib;
    } else {
      inter += std::min(ia->second, ib->second);
      uni += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double similarity(const Prediction& prediction, const GroundTruth& truth, MatchMode mode) {
  if (mode == MatchMode::bbox) {
    if (!prediction.bbox) throw ModeMismatchError("bbox matching requires a prediction bounding box");
    if (!truth.bbox) throw ModeMismatchError("bbox matching requires a ground-truth bounding box");
    return iou(*prediction.bbox, *truth.bbox);
  }
  if (prediction.markup.empty() && !prediction.table) {
    throw ModeMismatchError("content matching requires prediction markup");
  }
  if (!prediction.table) return 0.0;
  return content_jaccard(*prediction.table, truth.table);
}

GridMatrix<double> similarity_matrix(std::span<const Prediction> predictions, std::span<const GroundTruth> truths,
                                     MatchMode mode) {
  GridMatrix<double> sim(predictions.size(), truths.size(), 0.0);
  for (std::size_t p = 0; p < predictions.size(); ++p) {
    for (std::size_t g = 0; g < truths.size(); ++g) sim(p, g) = similarity(predictions[p], truths[g], mode);
  }
  return sim;
}

MatchSet match_subset(std::span<const Prediction> predictions, std::span<const std::size_t> subset,
                      const GridMatrix<double>& sim, double theta_j) {
  struct Candidate {
    double sim;
    double confidence;
    std::size_t pred;
    std::size_t gt;
  };
  const std::size_t n_truths = sim.cols();
  std::vector<Candidate> candidates;
  for (std::size_t p : subset) {
    for (std::size_t g = 0; g < n_truths; ++g) {
      if (sim(p, g) > theta_j) candidates.push_back({sim(p, g), predictions[p].confidence, p, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(-a.sim, -a.confidence, a.pred, a.gt) < std::tuple(-b.sim, -b.confidence, b.pred, b.gt);
  });
  std::vector<char> pred_taken(predictions.size(), 0);
  std::vector<char> gt_taken(n_truths, 0);
  MatchSet out;
  out.ground_truth_count = n_truths;
  for (const auto& c : candidates) {
    if (pred_taken[c.pred] || gt_taken[c.gt]) continue;
    pred_taken[c.pred] = 1;
    gt_taken[c.gt] = 1;
    out.pairs.push_back({c.pred, c.gt, c.sim});
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.prediction < b.prediction; });
  for (std::size_t p : subset) {
    if (!pred_taken[p]) out.false_positives.push_back(p);
  }
  for (std::size_t g = 0; g < n_truths; ++g) {
    if (!gt_taken[g]) out.false_negatives.push_back(g);
  }
  return out;
}

MatchSet match_subset(std::span<const Prediction> predictions, std::span<const std::size_t> subset,
                      std::span<const GroundTruth> truths, MatchMode mode, double theta_j) {
  GridMatrix<double> sim(predictions.size(), truths.size(), 0.0);
  for (std::size_t p : subset) {
    for (std::size_t g = 0; g < truths.size(); ++g) sim(p, g) = similarity(predictions[p], truths[g], mode);
  }
  return match_subset(predictions, subset, sim, theta_j);
}

MatchSet match(std::span<const Prediction> positives, std::span<const GroundTruth> truths, MatchMode mode,
               double theta_j) {
  std::vector<std::size_t> all(positives.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return match_subset(positives, all, truths, mode, theta_j);
}

ClassifierReport content_classifier_report(std::span<const MatchSet> bbox_pages,
                                           std::span<const MatchSet> content_pages) {
  if (bbox_pages.size() != content_pages.size()) {
    throw CorpusMismatchError("match sets cover " + std::to_string(bbox_pages.size()) + " and " +
                              std::to_string(content_pages.size()) + " pages");
  }
  std::size_t reference = 0;
  std::size_t predicted = 0;
  std::size_t both = 0;
  for (std::size_t i = 0; i < bbox_pages.size(); ++i) {
    const auto& b = bbox_pages[i];
    const auto& c = content_pages[i];
    if (b.positive_count() != c.positive_count() || b.ground_truth_count != c.ground_truth_count) {
      throw CorpusMismatchError("page " + std::to_string(i) + " differs between the two match sets");
    }
    std::set<std::size_t> ref;
    for (const auto& p : b.pairs) ref.insert(p.prediction);
    reference += ref.size();
    predicted += c.pairs.size();
    for (const auto& p : c.pairs) both += ref.count(p.prediction);
  }
  ClassifierReport out;
  out.precision = predicted == 0 ? (reference == 0 ? 1.0 : 0.0) : double(both) / double(predicted);
  out.recall = reference == 0 ? 1.0 : double(both) / double(reference);
  return out;
}

ClassifierReport content_classifier_report(const MatchSet& bbox_matches, const MatchSet& content_matches) {
  return content_classifier_report(std::span(&bbox_matches, 1), std::span(&content_matches, 1));
}

}  // namespace tabscore
