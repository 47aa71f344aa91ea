// Command-line front end: corpus evaluation, calibration, markup
// normalization, XY-cut segmentation and fixture generation.

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "tabscore/errors.hpp"
#include "tabscore/fixture.hpp"
#include "tabscore/geometry.hpp"
#include "tabscore/harness.hpp"
#include "tabscore/table_model.hpp"

namespace {

using namespace tabscore;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInternalError = 2;

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  return read_all(in);
}

// Flags shared by the evaluation subcommands; applied over the config file.
struct RunFlags {
  std::string corpus;
  std::string config;
  std::string mode;
  double theta_j = 0.5;
  double theta_c = 0.5;
  std::vector<double> densities;
  int bins = 10;
  std::vector<std::string> weightings;
  std::vector<double> thresholds;
  double nms_iou = 0.5;
  bool filter_empty = false;
  std::string out;
  bool quiet = false;

  CLI::Option* theta_j_opt = nullptr;
  CLI::Option* theta_c_opt = nullptr;
  CLI::Option* bins_opt = nullptr;
  CLI::Option* nms_opt = nullptr;

  void attach(CLI::App& cmd, bool with_structure) {
    cmd.add_option("corpus", corpus, "JSONL corpus file")->required();
    cmd.add_option("--config", config, "JSON run configuration; flags override it");
    cmd.add_option("--mode", mode, "matching mode")->check(CLI::IsMember({"bbox", "content"}));
    theta_j_opt = cmd.add_option("--theta-j", theta_j, "similarity threshold for a true positive")
                      ->check(CLI::Range(0.0, 1.0));
    theta_c_opt = cmd.add_option("--theta-c", theta_c, "confidence threshold of the positive set")
                      ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--density", densities, "lower bound s of the random-threshold density (repeatable)");
    bins_opt = cmd.add_option("--bins", bins, "D-ECE bin count")->check(CLI::PositiveNumber);
    if (with_structure) {
      cmd.add_option("--weighting", weightings, "structure metric(s) for TSR|TD and TE scores")
          ->check(CLI::IsMember({"topology", "content", "teds"}));
    }
    cmd.add_option("--thresholds", thresholds, "fixed confidence levels for the curves (default: all)");
    nms_opt = cmd.add_option("--nms-iou", nms_iou, "apply NMS to predicted boxes at this IoU")
                  ->check(CLI::Range(0.0, 1.0));
    cmd.add_flag("--filter-empty", filter_empty, "drop predicted boxes without any token center");
    cmd.add_option("--out", out, "report directory (default: report)");
    cmd.add_flag("-q,--quiet", quiet, "do not print scalars");
  }

  RunConfig build(ReportScope scope) const {
    RunConfig cfg;
    cfg.scope = scope;
    if (!config.empty()) apply_config_json(cfg, read_file(config));
    if (!mode.empty()) cfg.mode = parse_match_mode(mode);
    if (theta_j_opt->count()) cfg.theta_j = theta_j;
    if (theta_c_opt->count()) cfg.theta_c = theta_c;
    if (!densities.empty()) cfg.densities = densities;
    if (bins_opt->count()) cfg.bins = bins;
    if (!weightings.empty()) {
      cfg.weightings.clear();
      for (const auto& w : weightings) cfg.weightings.push_back(parse_tsr_metric(w));
    }
    if (!thresholds.empty()) cfg.sweep_thresholds = thresholds;
    if (nms_opt->count()) cfg.nms_iou = nms_iou;
    if (filter_empty) cfg.filter_empty = true;
    if (!out.empty()) cfg.output_dir = out;
    validate(cfg);
    return cfg;
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

int run_eval(const RunFlags& flags, ReportScope scope) {
  const RunConfig cfg = flags.build(scope);
  const Corpus corpus = load_corpus(flags.corpus);
  const MetricReport report = evaluate(corpus, cfg);
  print_warnings(report.warnings);
  emit_report(report, cfg.output_dir);
  if (!flags.quiet) {
    for (const auto& [name, value] : report.scalars) {
      fmt::print("{:<28} {}\n", name, value ? fmt::format("{:.6f}", *value) : std::string("n/a"));
    }
    fmt::print("report written to {}\n", cfg.output_dir.string());
  }
  return kOk;
}

int run_calibration(const RunFlags& flags) {
  const RunConfig cfg = flags.build(ReportScope::detection);
  const Corpus corpus = load_corpus(flags.corpus);
  print_warnings(corpus.warnings);
  const auto pages = corpus_pages(corpus, cfg);
  const auto samples = calibration_samples(pages, cfg.mode, cfg.theta_j);
  const CalibrationResult result = d_ece(samples, cfg.bins);
  std::string table = "lo,hi,count,mean_conf,precision\n";
  for (const auto& b : result.bins) {
    table += b.count ? fmt::format("{},{},{},{},{}\n", b.lo, b.hi, b.count, b.mean_conf, b.precision)
                     : fmt::format("{},{},0,,\n", b.lo, b.hi);
  }
  if (samples.empty()) {
    fmt::print("d_ece n/a (no predictions)\n");
  } else {
    fmt::print("d_ece {}\n", result.d_ece);
  }
  fmt::print("{}", table);
  if (!flags.out.empty()) {
    std::filesystem::create_directories(flags.out);
    std::ofstream(std::filesystem::path(flags.out) / "reliability_bins.csv", std::ios::binary) << table;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scores table detection, structure recognition and end-to-end table extraction"};
  app.require_subcommand(1);

  RunFlags td_flags;
  RunFlags tsr_flags;
  RunFlags te_flags;
  RunFlags cal_flags;
  auto* td = app.add_subcommand("eval-td", "detection metrics: P/R/F1, expected metrics, AP, D-ECE");
  td_flags.attach(*td, false);
  auto* tsr = app.add_subcommand("eval-tsr", "detection metrics plus TSR|TD structure scores");
  tsr_flags.attach(*tsr, true);
  auto* te = app.add_subcommand("eval-te", "full pipeline including TSR-weighted P/R/F1/AP");
  te_flags.attach(*te, true);
  auto* cal = app.add_subcommand("calibration", "D-ECE and reliability bins only");
  cal_flags.attach(*cal, false);

  std::string normalize_input;
  auto* norm = app.add_subcommand("normalize", "normalize table markup (file or standard input)");
  norm->add_option("input", normalize_input, "markup file; standard input when omitted");

  std::string image_path;
  XYCutConfig xy;
  auto* cut = app.add_subcommand("xycut", "segment a page image with recursive XY-cut");
  cut->add_option("image", image_path, "PNG or PNM image")->required();
  cut->add_option("--gap", xy.gap_threshold, "minimum whitespace band width (px)")->check(CLI::NonNegativeNumber);
  cut->add_option("--min-area", xy.min_area, "regions below this area are not split (px^2)")
      ->check(CLI::NonNegativeNumber);
  cut->add_option("--binarization", xy.binarization_threshold, "luminance below this is ink")
      ->check(CLI::Range(0.0, 1.0));

  std::uint64_t seed = 0;
  FixtureOptions fixture;
  std::string fixture_out;
  auto* gen = app.add_subcommand("gen-fixture", "write a seeded synthetic corpus");
  gen->add_option("--seed", seed, "random seed")->required();
  gen->add_option("--pages", fixture.pages, "page count")->check(CLI::NonNegativeNumber);
  gen->add_option("--max-rows", fixture.max_rows, "largest row count")->check(CLI::PositiveNumber);
  gen->add_option("--max-cols", fixture.max_cols, "largest column count")->check(CLI::PositiveNumber);
  gen->add_option("--span-prob", fixture.span_probability, "chance that a cell spans")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", fixture_out, "output file; standard output when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (*td) return run_eval(td_flags, ReportScope::detection);
    if (*tsr) return run_eval(tsr_flags, ReportScope::structure);
    if (*te) return run_eval(te_flags, ReportScope::full);
    if (*cal) return run_calibration(cal_flags);
    if (*norm) {
      const std::string markup = normalize_input.empty() ? read_all(std::cin) : read_file(normalize_input);
      fmt::print("{}\n", normalize_markup(markup));
      return kOk;
    }
    if (*cut) {
      const PixelPage page = binarize(load_image(image_path), xy.binarization_threshold);
      fmt::print("x0,y0,x1,y1\n");
      for (const auto& b : xycut(page, xy)) fmt::print("{},{},{},{}\n", b.x0, b.y0, b.x1, b.y1);
      return kOk;
    }
    if (*gen) {
      const std::string text = generate_fixture(seed, fixture);
      if (fixture_out.empty()) {
        fmt::print("{}", text);
      } else {
        std::ofstream out(fixture_out, std::ios::binary);
        if (!out) throw InputError("cannot write '" + fixture_out + "'");
        out << text;
      }
      return kOk;
    }
  } catch (const tabscore::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kInternalError;
  }
  return kInternalError;
}
