#pragma once

// Corpus ingestion, run configuration, corpus-level evaluation and report
// emission.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabscore/detection_metrics.hpp"
#include "tabscore/e2e_metrics.hpp"
#include "tabscore/geometry.hpp"
#include "tabscore/matching.hpp"

namespace tabscore {

/// One page of a corpus file, with its 1-based line number.
struct CorpusRecord {
  std::string page_id;
  double width = 0.0;
  double height = 0.0;
  std::vector<GroundTruth> ground_truth;
  std::vector<Prediction> predictions;
  std::vector<Token> tokens;
  std::size_t line = 0;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  /// Recoverable issues: out-of-page boxes, unparsable prediction markup,
  /// clamped spans.
  std::vector<std::string> warnings;
};

/// Reads a line-delimited JSON corpus. Blank lines are skipped and unknown
/// fields ignored. Every malformed line is reported in one InputError whose
/// message holds one "<source>:<line>: <reason>" entry per line.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view text, std::string_view source = "<corpus>");

/// Which metric families evaluate() computes.
enum class ReportScope { detection, structure, full };

struct RunConfig {
  MatchMode mode = MatchMode::bbox;
  double theta_j = 0.5;
  double theta_c = 0.5;
  /// Lower bounds s of the random-threshold densities to report.
  std::vector<double> densities{0.0, 0.5};
  int bins = 10;
  /// Structure metrics used for TSR|TD and the TE scores.
  std::vector<TsrMetric> weightings{kAllTsrMetrics[0], kAllTsrMetrics[1], kAllTsrMetrics[2]};
  /// Confidence levels of the PR and TE curves; empty sweeps every distinct
  /// confidence.
  std::vector<double> sweep_thresholds;
  /// Optional pipeline preprocessing of predictions before scoring.
  std::optional<double> nms_iou;
  bool filter_empty = false;
  ReportScope scope = ReportScope::full;
  std::filesystem::path output_dir = "report";
};

/// Throws InputError on out-of-range values.
void validate(const RunConfig& cfg);

/// Overrides fields present in a JSON config document: mode, theta_j,
/// theta_c, density (number or list), bins, weighting (name or list),
/// thresholds, nms_iou, filter_empty, output.
void apply_config_json(RunConfig& cfg, std::string_view json_text);

std::string_view to_string(MatchMode mode);
MatchMode parse_match_mode(std::string_view name);

using Scalar = std::optional<double>;

struct PageDiagnostics {
  std::string page_id;
  std::size_t ground_truths = 0;
  std::size_t predictions = 0;
  std::size_t positives = 0;
  std::size_t true_positives = 0;
  Scalar precision;
  Scalar recall;
  Scalar f1;
  std::map<std::string, Scalar> tsr;  // mean structure score of the page's matches, by metric
};

struct MetricReport {
  /// Scalars keyed by dotted name; nullopt marks not-applicable.
  std::map<std::string, Scalar> scalars;
  std::map<std::string, std::size_t> counts;
  std::vector<PRPoint> pr_curve;
  std::map<std::string, std::vector<TePoint>> te_curves;
  std::vector<ReliabilityBin> reliability;
  std::vector<PageDiagnostics> pages;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> config;
};

/// Pages of a corpus in page_id order, after the configured preprocessing.
std::vector<Page> corpus_pages(const Corpus& corpus, const RunConfig& cfg);

/// Every in-scope metric of the run. Throws InputError listing each page
/// that lacks a field the matching mode needs.
MetricReport evaluate(const Corpus& corpus, const RunConfig& cfg);

/// Writes summary.json, pr_curve.csv, te_curve_<metric>.csv,
/// reliability_bins.csv and per_page.csv. Output is byte-stable.
void emit_report(const MetricReport& report, const std::filesystem::path& dir);

/// summary.json content.
std::string summary_json(const MetricReport& report);

}  // namespace tabscore
