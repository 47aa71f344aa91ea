#pragma once

// Prediction sets and one-to-one prediction/ground-truth assignment under
// bbox IoU or content-Jaccard similarity.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tabscore/geometry.hpp"
#include "tabscore/table_model.hpp"

namespace tabscore {

/// One model output. `markup` is the raw predicted markup (empty when the
/// model only emits a box); `table` is its parse, absent when the markup is
/// missing or could not be parsed. Confidence is 1.0 for models without
/// scores.
struct Prediction {
  std::optional<BBox> bbox;
  std::string markup;
  std::optional<TableGrid> table;
  double confidence = 1.0;
};

struct GroundTruth {
  std::optional<BBox> bbox;
  TableGrid table;
};

/// Ground truth and predictions of one document page. Tables never match
/// across pages.
struct Page {
  std::string id;
  std::vector<GroundTruth> ground_truth;
  std::vector<Prediction> predictions;
};

enum class MatchMode { bbox, content };

struct MatchConfig {
  MatchMode mode = MatchMode::bbox;
  double theta_j = 0.5;
  double theta_c = 0.5;
};

struct MatchPair {
  std::size_t prediction = 0;
  std::size_t ground_truth = 0;
  double jaccard = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// One-to-one assignment between a positive prediction set and the ground
/// truth of one page. Indices refer to the spans passed to match().
struct MatchSet {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> false_positives;
  std::vector<std::size_t> false_negatives;
  std::size_t ground_truth_count = 0;

  std::size_t positive_count() const { return pairs.size() + false_positives.size(); }
  std::size_t true_positives() const { return pairs.size(); }
};

/// Indices of predictions with confidence strictly above theta_c.
std::vector<std::size_t> threshold_positives(std::span<const Prediction> predictions, double theta_c);

/// Predictions restricted to `indices`, in that order.
std::vector<Prediction> select(std::span<const Prediction> predictions, std::span<const std::size_t> indices);

/// The multiset elements of content-Jaccard: the table text in row-major
/// cell order with whitespace removed is cut into consecutive 2-character
/// chunks (a trailing odd character forms its own chunk) and each pair of
/// adjacent chunks is one element.
std::vector<std::pair<std::u32string, std::u32string>> content_chunk_pairs(const TableGrid& table);

/// Multiset Jaccard over content_chunk_pairs: 1 when both are empty, 0 when
/// exactly one is.
double content_jaccard(const TableGrid& a, const TableGrid& b);

/// Similarity of a prediction to a ground truth under `mode`. Throws
/// ModeMismatchError when the prediction lacks the required field; a
/// prediction whose markup failed to parse scores 0 in content mode.
double similarity(const Prediction& prediction, const GroundTruth& truth, MatchMode mode);

/// Greedy one-to-one matching: candidate pairs with similarity > theta_j
/// are accepted in order of descending similarity (ties: higher confidence,
/// then lower prediction index, then lower ground-truth index) unless
/// either side is taken.
MatchSet match(std::span<const Prediction> positives, std::span<const GroundTruth> truths, MatchMode mode,
               double theta_j);

/// match() over the predictions listed in `subset` (ascending indices);
/// indices in the result refer to `predictions`.
MatchSet match_subset(std::span<const Prediction> predictions, std::span<const std::size_t> subset,
                      std::span<const GroundTruth> truths, MatchMode mode, double theta_j);

/// similarity() for every (prediction, ground truth) pair.
GridMatrix<double> similarity_matrix(std::span<const Prediction> predictions, std::span<const GroundTruth> truths,
                                     MatchMode mode);

/// match_subset() with precomputed similarities (rows: predictions,
/// columns: ground truth).
MatchSet match_subset(std::span<const Prediction> predictions, std::span<const std::size_t> subset,
                      const GridMatrix<double>& similarities, double theta_j);

struct ClassifierReport {
  double precision = 0.0;
  double recall = 0.0;
};

/// Scores content matching as a classifier of true positives, taking bbox
/// matching as the reference. Match sets are given per page and must cover
/// the same predictions and ground truth. Throws CorpusMismatchError.
ClassifierReport content_classifier_report(std::span<const MatchSet> bbox_pages,
                                           std::span<const MatchSet> content_pages);
ClassifierReport content_classifier_report(const MatchSet& bbox_matches, const MatchSet& content_matches);

}  // namespace tabscore
