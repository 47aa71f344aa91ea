#include "tabscore/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "tabscore/errors.hpp"

namespace tabscore {

using nlohmann::json;

namespace {

struct LineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string number(double v) { return fmt::format("{}", v); }

const json* field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double read_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw LineError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw LineError(what + " must be finite");
  return x;
}

const json& read_array(const json& obj, const char* name, const std::string& where) {
  const json* v = field(obj, name);
  if (!v) throw LineError(where + "missing '" + name + "'");
  if (!v->is_array()) throw LineError(where + "'" + name + "' must be an array");
  return *v;
}

BBox read_bbox(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 4) throw LineError(what + " must be an array of 4 numbers");
  BBox b{read_number(v[0], what), read_number(v[1], what), read_number(v[2], what), read_number(v[3], what)};
  if (!b.valid()) throw LineError(what + " must satisfy x0 <= x1 and y0 <= y1");
  return b;
}

void check_bounds(const BBox& b, const CorpusRecord& rec, const std::string& what, const std::string& prefix,
                  std::vector<std::string>& warnings) {
  if (rec.width <= 0 || rec.height <= 0) return;
  if (b.x0 < 0 || b.y0 < 0 || b.x1 > rec.width || b.y1 > rec.height) {
    warnings.push_back(prefix + what + " lies outside the " + number(rec.width) + "x" + number(rec.height) + " page");
  }
}

CorpusRecord read_record(const json& obj, const std::string& prefix, std::vector<std::string>& warnings) {
  if (!obj.is_object()) throw LineError("record must be a JSON object");
  CorpusRecord rec;
  const json* id = field(obj, "page_id");
  if (!id || !id->is_string()) throw LineError("'page_id' must be a string");
  rec.page_id = id->get<std::string>();
  for (const char* dim : {"width", "height"}) {
    const json* v = field(obj, dim);
    if (!v) throw LineError(std::string("missing '") + dim + "'");
    const double x = read_number(*v, std::string("'") + dim + "'");
    if (x < 0) throw LineError(std::string("'") + dim + "' must be non-negative");
    (dim[0] == 'w' ? rec.width : rec.height) = x;
  }

  const json& gts = read_array(obj, "ground_truth", "");
  for (std::size_t k = 0; k < gts.size(); ++k) {
    const std::string what = "ground_truth[" + std::to_string(k) + "]";
    const json& g = gts[k];
    if (!g.is_object()) throw LineError(what + " must be an object");
    std::optional<BBox> bbox;
    if (const json* b = field(g, "bbox")) {
      bbox = read_bbox(*b, what + ".bbox");
      check_bounds(*bbox, rec, what + ".bbox", prefix, warnings);
    }
    const json* markup = field(g, "markup");
    if (!markup || !markup->is_string()) throw LineError(what + ".markup must be a string");
    try {
      ParsedTable parsed = parse_table(markup->get<std::string>());
      for (const auto& w : parsed.warnings) warnings.push_back(prefix + what + ": " + w);
      rec.ground_truth.push_back(GroundTruth{bbox, std::move(parsed.table)});
    } catch (const Error& e) {
      throw LineError(what + ".markup: " + e.what());
    }
  }

  const json& preds = read_array(obj, "predictions", "");
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const std::string what = "predictions[" + std::to_string(k) + "]";
    const json& p = preds[k];
    if (!p.is_object()) throw LineError(what + " must be an object");
    Prediction pred;
    if (const json* b = field(p, "bbox")) {
      pred.bbox = read_bbox(*b, what + ".bbox");
      check_bounds(*pred.bbox, rec, what + ".bbox", prefix, warnings);
    }
    if (const json* m = field(p, "markup")) {
      if (!m->is_string()) throw LineError(what + ".markup must be a string");
      pred.markup = m->get<std::string>();
    }
    if (!pred.bbox && pred.markup.empty()) throw LineError(what + " has neither bbox nor markup");
    if (const json* c = field(p, "confidence")) {
      pred.confidence = read_number(*c, what + ".confidence");
      if (pred.confidence < 0 || pred.confidence > 1) throw LineError(what + ".confidence must lie in [0, 1]");
    }
    if (!pred.markup.empty()) {
      try {
        ParsedTable parsed = parse_table(pred.markup);
        for (const auto& w : parsed.warnings) warnings.push_back(prefix + what + ": " + w);
        pred.table = std::move(parsed.table);
      } catch (const Error& e) {
        warnings.push_back(prefix + what + ": markup not scored as a table (" + e.what() + ")");
      }
    }
    rec.predictions.push_back(std::move(pred));
  }

  if (const json* toks = field(obj, "tokens")) {
    if (!toks->is_array()) throw LineError("'tokens' must be an array");
    for (std::size_t k = 0; k < toks->size(); ++k) {
      const std::string what = "tokens[" + std::to_string(k) + "]";
      const json& t = (*toks)[k];
      if (!t.is_object()) throw LineError(what + " must be an object");
      const json* b = field(t, "bbox");
      if (!b) throw LineError(what + " is missing 'bbox'");
      const json* text = field(t, "text");
      if (!text || !text->is_string() || text->get<std::string>().empty()) {
        throw LineError(what + ".text must be a non-empty string");
      }
      rec.tokens.push_back(Token{read_bbox(*b, what + ".bbox"), text->get<std::string>()});
    }
  }
  return rec;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

}  // namespace

Corpus parse_corpus(std::string_view text, std::string_view source) {
  Corpus corpus;
  std::vector<std::string> errors;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string prefix = fmt::format("{}:{}: ", source, line_no);
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw LineError(std::string("invalid JSON (") + e.what() + ")");
      }
      std::vector<std::string> warnings;
      CorpusRecord rec = read_record(obj, prefix, warnings);
      rec.line = line_no;
      auto [it, inserted] = seen.emplace(rec.page_id, line_no);
      if (!inserted) {
        throw LineError(fmt::format("duplicate page_id '{}' (first seen on line {})", rec.page_id, it->second));
      }
      corpus.warnings.insert(corpus.warnings.end(), warnings.begin(), warnings.end());
      corpus.records.push_back(std::move(rec));
    } catch (const LineError& e) {
      errors.push_back(prefix + e.what());
    }
  }
  if (!errors.empty()) throw InputError(join(errors));
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path.string());
}

std::string_view to_string(MatchMode mode) { return mode == MatchMode::bbox ? "bbox" : "content"; }

MatchMode parse_match_mode(std::string_view name) {
  if (name == "bbox") return MatchMode::bbox;
  if (name == "content") return MatchMode::content;
  throw InputError("unknown matching mode '" + std::string(name) + "' (expected bbox or content)");
}

void validate(const RunConfig& cfg) {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError(fmt::format("{} must lie in [0, 1], got {}", name, v));
  };
  unit(cfg.theta_j, "theta_j");
  unit(cfg.theta_c, "theta_c");
  if (cfg.densities.empty()) throw InputError("at least one density is required");
  for (double s : cfg.densities) {
    if (!(s >= 0.0 && s < 1.0)) throw InputError(fmt::format("density lower bound must lie in [0, 1), got {}", s));
  }
  if (cfg.bins < 1) throw InputError(fmt::format("bins must be at least 1, got {}", cfg.bins));
  if (cfg.weightings.empty()) throw InputError("at least one weighting metric is required");
  for (double t : cfg.sweep_thresholds) unit(t, "sweep threshold");
  if (cfg.nms_iou) unit(*cfg.nms_iou, "nms_iou");
}

void apply_config_json(RunConfig& cfg, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  auto num = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw InputError("config '" + key + "' must be a number");
    return v.get<double>();
  };
  auto numbers = [&](const json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& x : v) out.push_back(num(x, key));
    } else {
      out.push_back(num(v, key));
    }
    return out;
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "mode") {
      if (!v.is_string()) throw InputError("config 'mode' must be a string");
      cfg.mode = parse_match_mode(v.get<std::string>());
    } else if (key == "theta_j") {
      cfg.theta_j = num(v, key);
    } else if (key == "theta_c") {
      cfg.theta_c = num(v, key);
    } else if (key == "density") {
      cfg.densities = numbers(v, key);
    } else if (key == "bins") {
      if (!v.is_number_integer()) throw InputError("config 'bins' must be an integer");
      cfg.bins = v.get<int>();
    } else if (key == "weighting") {
      cfg.weightings.clear();
      const json list = v.is_array() ? v : json::array({v});
      for (const auto& w : list) {
        if (!w.is_string()) throw InputError("config 'weighting' must be a name or a list of names");
        cfg.weightings.push_back(parse_tsr_metric(w.get<std::string>()));
      }
    } else if (key == "thresholds") {
      cfg.sweep_thresholds = numbers(v, key);
    } else if (key == "nms_iou") {
      if (v.is_null()) {
        cfg.nms_iou.reset();
      } else {
        cfg.nms_iou = num(v, key);
      }
    } else if (key == "filter_empty") {
      if (!v.is_boolean()) throw InputError("config 'filter_empty' must be a boolean");
      cfg.filter_empty = v.get<bool>();
    } else if (key == "output") {
      if (!v.is_string()) throw InputError("config 'output' must be a string");
      cfg.output_dir = v.get<std::string>();
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  validate(cfg);
}

std::vector<Page> corpus_pages(const Corpus& corpus, const RunConfig& cfg) {
  std::vector<const CorpusRecord*> order;
  for (const auto& r : corpus.records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->page_id < b->page_id; });

  std::vector<Page> pages;
  pages.reserve(order.size());
  for (const CorpusRecord* rec : order) {
    std::vector<Prediction> preds = rec->predictions;
    if (cfg.filter_empty) {
      std::vector<Prediction> kept;
      for (auto& p : preds) {
        if (!p.bbox) {
          kept.push_back(std::move(p));
          continue;
        }
        const BBox box = *p.bbox;
        if (!filter_empty(std::span<const BBox>(&box, 1), rec->tokens).empty()) kept.push_back(std::move(p));
      }
      preds = std::move(kept);
    }
    if (cfg.nms_iou) {
      std::vector<ScoredBox> boxes;
      std::vector<std::size_t> boxed;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].bbox) {
          boxes.push_back(ScoredBox{*preds[i].bbox, preds[i].confidence});
          boxed.push_back(i);
        }
      }
      std::vector<char> keep(preds.size(), 1);
      for (std::size_t i : boxed) keep[i] = 0;
      for (std::size_t k : nms(boxes, *cfg.nms_iou)) keep[boxed[k]] = 1;
      std::vector<Prediction> kept;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (keep[i]) kept.push_back(std::move(preds[i]));
      }
      preds = std::move(kept);
    }
    pages.push_back(Page{rec->page_id, rec->ground_truth, std::move(preds)});
  }
  return pages;
}

namespace {

std::string density_key(double s) { return "expected_s" + number(s); }

std::vector<std::string> scalar_names(const RunConfig& cfg) {
  std::vector<std::string> names{"detection.precision", "detection.recall", "detection.f1", "detection.wavg_f1",
                                 "detection.ap",        "calibration.d_ece", "macro.precision", "macro.recall",
                                 "macro.f1",            "classifier.precision", "classifier.recall"};
  for (double t : kWavgThresholds) names.push_back("detection.f1@" + number(t));
  for (double s : cfg.densities) {
    for (const char* m : {".precision", ".recall", ".f1"}) names.push_back(density_key(s) + m);
  }
  if (cfg.scope != ReportScope::detection) {
    for (TsrMetric w : cfg.weightings) names.push_back("tsr_given_td." + std::string(to_string(w)));
  }
  if (cfg.scope == ReportScope::full) {
    for (TsrMetric w : cfg.weightings) {
      for (const char* m : {".precision", ".recall", ".f1", ".ap"}) names.push_back("te." + std::string(to_string(w)) + m);
    }
  }
  return names;
}

void check_mode_fields(const Corpus& corpus, const RunConfig& cfg) {
  std::vector<std::string> errors;
  std::vector<const CorpusRecord*> order;
  for (const auto& r : corpus.records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->line < b->line; });
  for (const CorpusRecord* rec : order) {
    const std::string prefix = fmt::format("line {} (page '{}'): ", rec->line, rec->page_id);
    if (cfg.mode == MatchMode::bbox) {
      for (std::size_t k = 0; k < rec->ground_truth.size(); ++k) {
        if (!rec->ground_truth[k].bbox) errors.push_back(prefix + fmt::format("ground_truth[{}] has no bbox", k));
      }
      for (std::size_t k = 0; k < rec->predictions.size(); ++k) {
        if (!rec->predictions[k].bbox) errors.push_back(prefix + fmt::format("predictions[{}] has no bbox", k));
      }
    } else {
      for (std::size_t k = 0; k < rec->predictions.size(); ++k) {
        if (rec->predictions[k].markup.empty()) {
          errors.push_back(prefix + fmt::format("predictions[{}] has no markup", k));
        }
      }
    }
  }
  if (!errors.empty()) {
    throw InputError(fmt::format("{} matching needs fields the corpus lacks:\n{}", to_string(cfg.mode), join(errors)));
  }
}

Scalar mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  long double sum = 0;
  for (double x : sorted) sum += x;
  return static_cast<double>(sum / static_cast<long double>(sorted.size()));
}

bool classifier_applicable(const std::vector<Page>& pages) {
  for (const auto& page : pages) {
    for (const auto& g : page.ground_truth) {
      if (!g.bbox) return false;
    }
    for (const auto& p : page.predictions) {
      if (!p.bbox || p.markup.empty()) return false;
    }
  }
  return !pages.empty();
}

}  // namespace

MetricReport evaluate(const Corpus& corpus, const RunConfig& cfg) {
  validate(cfg);
  check_mode_fields(corpus, cfg);
  MetricReport report;
  report.warnings = corpus.warnings;
  report.config = {{"mode", std::string(to_string(cfg.mode))},
                   {"theta_j", number(cfg.theta_j)},
                   {"theta_c", number(cfg.theta_c)},
                   {"bins", std::to_string(cfg.bins)},
                   {"filter_empty", cfg.filter_empty ? "true" : "false"},
                   {"nms_iou", cfg.nms_iou ? number(*cfg.nms_iou) : "none"}};
  {
    std::string dens;
    for (double s : cfg.densities) dens += (dens.empty() ? "" : ",") + number(s);
    report.config["density"] = dens;
    std::string ws;
    for (TsrMetric w : cfg.weightings) ws += (ws.empty() ? "" : ",") + std::string(to_string(w));
    report.config["weighting"] = ws;
    std::string ts;
    for (double t : cfg.sweep_thresholds) ts += (ts.empty() ? "" : ",") + number(t);
    report.config["thresholds"] = ts.empty() ? "all" : ts;
  }
  for (const auto& name : scalar_names(cfg)) report.scalars[name] = std::nullopt;

  const std::vector<Page> pages = corpus_pages(corpus, cfg);
  std::size_t n_preds = 0;
  std::size_t n_gts = 0;
  for (const auto& p : pages) {
    n_preds += p.predictions.size();
    n_gts += p.ground_truth.size();
  }
  report.counts = {{"pages", pages.size()}, {"predictions", n_preds}, {"ground_truth", n_gts}};
  if (pages.empty()) {
    report.counts.merge(std::map<std::string, std::size_t>{
        {"positives", 0}, {"true_positives", 0}, {"false_positives", 0}, {"false_negatives", 0}});
    report.reliability = d_ece({}, cfg.bins).bins;
    return report;
  }

  // thresholded matching on the confidence-positive set
  std::vector<std::vector<std::size_t>> positives(pages.size());
  std::vector<MatchSet> matches(pages.size());
  std::size_t n_pos = 0;
  std::size_t n_tp = 0;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    positives[p] = threshold_positives(pages[p].predictions, cfg.theta_c);
    matches[p] = match_subset(pages[p].predictions, positives[p], pages[p].ground_truth, cfg.mode, cfg.theta_j);
    n_pos += positives[p].size();
    n_tp += matches[p].true_positives();
  }
  report.counts["positives"] = n_pos;
  report.counts["true_positives"] = n_tp;
  report.counts["false_positives"] = n_pos - n_tp;
  report.counts["false_negatives"] = n_gts - n_tp;

  const PRF det = prf_from_counts(static_cast<double>(n_tp), n_pos, n_gts);
  report.scalars["detection.precision"] = det.precision;
  report.scalars["detection.recall"] = det.recall;
  report.scalars["detection.f1"] = det.f1;

  std::array<double, 4> f1s{};
  for (std::size_t t = 0; t < kWavgThresholds.size(); ++t) {
    std::size_t tp = 0;
    for (std::size_t p = 0; p < pages.size(); ++p) {
      tp += match_subset(pages[p].predictions, positives[p], pages[p].ground_truth, cfg.mode, kWavgThresholds[t])
                .true_positives();
    }
    f1s[t] = prf_from_counts(static_cast<double>(tp), n_pos, n_gts).f1;
    report.scalars["detection.f1@" + number(kWavgThresholds[t])] = f1s[t];
  }
  report.scalars["detection.wavg_f1"] = wavg_f1(f1s);

  std::vector<double> jaccards;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const auto js =
        positive_jaccards(match_subset(pages[p].predictions, positives[p], pages[p].ground_truth, cfg.mode, 0.0));
    jaccards.insert(jaccards.end(), js.begin(), js.end());
  }
  for (double s : cfg.densities) {
    const PRF e = expected_prf(jaccards, n_gts, ThresholdDensity(s));
    report.scalars[density_key(s) + ".precision"] = e.precision;
    report.scalars[density_key(s) + ".recall"] = e.recall;
    report.scalars[density_key(s) + ".f1"] = e.f1;
  }

  const auto sweep = confidence_sweep(pages, cfg.mode, cfg.theta_j, {}, cfg.sweep_thresholds);
  report.pr_curve = pr_curve(sweep);
  report.scalars["detection.ap"] = average_precision(sweep);

  const auto samples = calibration_samples(pages, cfg.mode, cfg.theta_j);
  const CalibrationResult cal = d_ece(samples, cfg.bins);
  report.reliability = cal.bins;
  if (!samples.empty()) report.scalars["calibration.d_ece"] = cal.d_ece;

  std::vector<double> macro_p;
  std::vector<double> macro_r;
  std::vector<double> macro_f;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const PRF prf = prf_at(matches[p]);
    macro_p.push_back(prf.precision);
    macro_r.push_back(prf.recall);
    macro_f.push_back(prf.f1);
    PageDiagnostics d;
    d.page_id = pages[p].id;
    d.ground_truths = pages[p].ground_truth.size();
    d.predictions = pages[p].predictions.size();
    d.positives = positives[p].size();
    d.true_positives = matches[p].true_positives();
    d.precision = prf.precision;
    d.recall = prf.recall;
    d.f1 = prf.f1;
    report.pages.push_back(std::move(d));
  }
  report.scalars["macro.precision"] = mean(macro_p);
  report.scalars["macro.recall"] = mean(macro_r);
  report.scalars["macro.f1"] = mean(macro_f);

  if (classifier_applicable(pages)) {
    std::vector<MatchSet> by_box;
    std::vector<MatchSet> by_content;
    for (std::size_t p = 0; p < pages.size(); ++p) {
      by_box.push_back(match_subset(pages[p].predictions, positives[p], pages[p].ground_truth, MatchMode::bbox, 0.5));
      by_content.push_back(
          match_subset(pages[p].predictions, positives[p], pages[p].ground_truth, MatchMode::content, 0.5));
    }
    const ClassifierReport cr = content_classifier_report(by_box, by_content);
    report.scalars["classifier.precision"] = cr.precision;
    report.scalars["classifier.recall"] = cr.recall;
  }

  if (cfg.scope == ReportScope::detection) return report;

  for (TsrMetric w : cfg.weightings) {
    const std::string name(to_string(w));
    std::vector<ScoredPair> pooled;
    for (std::size_t p = 0; p < pages.size(); ++p) {
      const auto scored = score_pairs(matches[p], pages[p].predictions, pages[p].ground_truth, w);
      report.pages[p].tsr[name] = tsr_given_td(scored);
      pooled.insert(pooled.end(), scored.begin(), scored.end());
    }
    report.scalars["tsr_given_td." + name] = tsr_given_td(pooled);
    if (cfg.scope != ReportScope::full) continue;
    const PRF te = te_precision_recall(pooled, n_pos, n_gts, cfg.theta_j);
    report.scalars["te." + name + ".precision"] = te.precision;
    report.scalars["te." + name + ".recall"] = te.recall;
    report.scalars["te." + name + ".f1"] = te.f1;
    const auto te_counts = te_sweep(pages, cfg.mode, cfg.theta_j, w, cfg.sweep_thresholds);
    report.scalars["te." + name + ".ap"] = average_precision(te_counts, true);
    report.te_curves[name] = te_curve(te_counts);
  }
  return report;
}

std::string summary_json(const MetricReport& report) {
  json doc;
  json metrics = json::object();
  for (const auto& [name, value] : report.scalars) {
    metrics[name] = value ? json(*value) : json(nullptr);
  }
  doc["metrics"] = std::move(metrics);
  doc["counts"] = report.counts;
  doc["config"] = report.config;
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_scalar(const Scalar& v) { return v ? number(*v) : ""; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace

void emit_report(const MetricReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir.string() + "': " + ec.message());

  write_file(dir / "summary.json", summary_json(report));

  std::string pr = "threshold,precision,recall\n";
  for (const auto& pt : report.pr_curve) pr += fmt::format("{},{},{}\n", pt.theta_c, pt.precision, pt.recall);
  write_file(dir / "pr_curve.csv", pr);

  for (const auto& [name, curve] : report.te_curves) {
    std::string te = "threshold,precision,recall,detection_recall\n";
    for (const auto& pt : curve) {
      te += fmt::format("{},{},{},{}\n", pt.theta_c, pt.precision, pt.recall, pt.detection_recall);
    }
    write_file(dir / ("te_curve_" + name + ".csv"), te);
  }

  std::string bins = "lo,hi,count,mean_conf,precision\n";
  for (const auto& b : report.reliability) {
    if (b.count == 0) {
      bins += fmt::format("{},{},0,,\n", b.lo, b.hi);
    } else {
      bins += fmt::format("{},{},{},{},{}\n", b.lo, b.hi, b.count, b.mean_conf, b.precision);
    }
  }
  write_file(dir / "reliability_bins.csv", bins);

  std::set<std::string> tsr_names;
  for (const auto& page : report.pages) {
    for (const auto& [name, v] : page.tsr) tsr_names.insert(name);
  }
  std::string pp = "page_id,ground_truths,predictions,positives,true_positives,precision,recall,f1";
  for (const auto& name : tsr_names) pp += ",tsr_" + name;
  pp += '\n';
  for (const auto& page : report.pages) {
    pp += fmt::format("{},{},{},{},{},{},{},{}", csv_field(page.page_id), page.ground_truths, page.predictions,
                      page.positives, page.true_positives, csv_scalar(page.precision), csv_scalar(page.recall),
                      csv_scalar(page.f1));
    for (const auto& name : tsr_names) {
      auto it = page.tsr.find(name);
      pp += "," + (it == page.tsr.end() ? std::string() : csv_scalar(it->second));
    }
    pp += '\n';
  }
  write_file(dir / "per_page.csv", pp);
}

}  // namespace tabscore
