#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tabscore/detection_metrics.hpp"
#include "tabscore/e2e_metrics.hpp"
#include "tabscore/errors.hpp"
#include "tabscore/harness.hpp"
#include "tabscore/matching.hpp"
#include "tabscore/structure_metrics.hpp"
#include "tabscore/table_model.hpp"

namespace py = pybind11;
using namespace tabscore;

namespace {

Prediction prediction_from_markup(const std::string& markup) {
  Prediction p;
  p.markup = markup;
  try {
    p.table = parse_table_markup(markup);
  } catch (const Error&) {
    // scored as 0, as in corpus evaluation
  }
  return p;
}

py::object optional_box(const std::optional<BBox>& b) {
  if (!b) return py::none();
  return py::make_tuple(b->x0, b->y0, b->x1, b->y1);
}

py::dict corpus_dict(const Corpus& corpus) {
  py::list records;
  for (const auto& r : corpus.records) {
    py::list gts;
    for (const auto& g : r.ground_truth) {
      py::dict d;
      d["bbox"] = optional_box(g.bbox);
      d["markup"] = to_markup(g.table);
      gts.append(d);
    }
    py::list preds;
    for (const auto& p : r.predictions) {
      py::dict d;
      d["bbox"] = optional_box(p.bbox);
      d["markup"] = p.markup;
      d["confidence"] = p.confidence;
      d["parsed"] = p.table.has_value();
      preds.append(d);
    }
    py::dict rec;
    rec["page_id"] = r.page_id;
    rec["line"] = r.line;
    rec["width"] = r.width;
    rec["height"] = r.height;
    rec["ground_truth"] = gts;
    rec["predictions"] = preds;
    rec["tokens"] = r.tokens.size();
    records.append(rec);
  }
  py::dict out;
  out["records"] = records;
  out["warnings"] = corpus.warnings;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "native core of the tabscore table extraction metrics";
  py::register_exception<Error>(m, "TabscoreError", PyExc_ValueError);

  m.def(
      "score_pair",
      [](const std::string& prediction, const std::string& truth, const std::string& metric) {
        GroundTruth gt{std::nullopt, parse_table_markup(truth)};
        return tsr_score(parse_tsr_metric(metric), prediction_from_markup(prediction), gt);
      },
      py::arg("prediction"), py::arg("truth"), py::arg("metric") = "teds");
  m.def(
      "teds", [](const std::string& a, const std::string& b) { return teds(parse_table_markup(a), parse_table_markup(b)); },
      py::arg("prediction"), py::arg("truth"));
  m.def(
      "grits_topology",
      [](const std::string& a, const std::string& b) {
        return grits_topology(parse_table_markup(a), parse_table_markup(b));
      },
      py::arg("prediction"), py::arg("truth"));
  m.def(
      "grits_content",
      [](const std::string& a, const std::string& b) {
        return grits_content(parse_table_markup(a), parse_table_markup(b));
      },
      py::arg("prediction"), py::arg("truth"));
  m.def(
      "content_jaccard",
      [](const std::string& a, const std::string& b) {
        return content_jaccard(parse_table_markup(a), parse_table_markup(b));
      },
      py::arg("a"), py::arg("b"));
  m.def("normalize_markup", [](const std::string& s) { return normalize_markup(s); }, py::arg("markup"));
  m.def(
      "expected_indicator", [](double j, double s) { return expected_indicator(j, ThresholdDensity(s)); },
      py::arg("jaccard"), py::arg("s") = 0.0);
  m.def(
      "d_ece",
      [](const std::vector<double>& confidences, const std::vector<bool>& true_positives, int bins) {
        if (confidences.size() != true_positives.size()) {
          throw InputError("confidences and true_positives differ in length");
        }
        std::vector<CalibrationSample> samples;
        for (std::size_t i = 0; i < confidences.size(); ++i) samples.push_back({confidences[i], true_positives[i]});
        const CalibrationResult r = d_ece(samples, bins);
        py::list out_bins;
        for (const auto& b : r.bins) {
          py::dict d;
          d["lo"] = b.lo;
          d["hi"] = b.hi;
          d["count"] = b.count;
          d["mean_conf"] = b.count ? py::cast(b.mean_conf) : py::none();
          d["precision"] = b.count ? py::cast(b.precision) : py::none();
          out_bins.append(d);
        }
        return py::make_tuple(r.d_ece, out_bins);
      },
      py::arg("confidences"), py::arg("true_positives"), py::arg("bins") = 10);
  m.def(
      "average_precision",
      [](const std::vector<double>& recalls, const std::vector<double>& precisions) {
        if (recalls.size() != precisions.size()) throw InputError("recalls and precisions differ in length");
        std::vector<PRPoint> curve;
        for (std::size_t i = 0; i < recalls.size(); ++i) curve.push_back({0.0, precisions[i], recalls[i]});
        return average_precision(curve);
      },
      py::arg("recalls"), py::arg("precisions"));
  m.def(
      "load_corpus", [](const std::string& path) { return corpus_dict(load_corpus(path)); }, py::arg("path"));
  m.def(
      "evaluate_corpus",
      [](const std::string& path, const std::string& config_json) {
        RunConfig cfg;
        if (!config_json.empty()) apply_config_json(cfg, config_json);
        const Corpus corpus = load_corpus(path);
        py::gil_scoped_release release;
        return summary_json(evaluate(corpus, cfg));
      },
      py::arg("path"), py::arg("config_json") = "");
}
