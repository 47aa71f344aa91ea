#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tabscore/harness.hpp"
#include "tabscore/structure_metrics.hpp"

using namespace tabscore;
using nlohmann::json;

namespace {

const std::string kDir = std::string(TABSCORE_SOURCE_DIR) + "/tests/fixtures/";

json expected() {
  std::ifstream in(kDir + "synthetic_expected.json");
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("golden fixture: every scalar and count matches the reference scorer") {
  const json want = expected();
  const MetricReport got = evaluate(load_corpus(kDir + "synthetic.jsonl"), RunConfig{});
  REQUIRE(got.scalars.size() == want["metrics"].size());
  for (const auto& [name, value] : got.scalars) {
    INFO(name);
    REQUIRE(want["metrics"].contains(name));
    const json& w = want["metrics"][name];
    REQUIRE(w.is_null() == !value.has_value());
    if (value) CHECK(std::abs(*value - w.get<double>()) <= 1e-9);
  }
  for (const auto& [name, value] : got.counts) {
    INFO(name);
    CHECK(value == want["counts"][name].get<std::size_t>());
  }
}

TEST_CASE("golden fixture: matched-pair GriTS equals the reference and stays under the exact bound") {
  const json want = expected();
  const Corpus corpus = load_corpus(kDir + "synthetic.jsonl");
  const auto pages = corpus_pages(corpus, RunConfig{});
  REQUIRE_FALSE(want["grits_pairs"].empty());
  for (const auto& pair : want["grits_pairs"]) {
    const auto id = pair["page"].get<std::string>();
    const auto it = std::find_if(pages.begin(), pages.end(), [&](const Page& p) { return p.id == id; });
    REQUIRE(it != pages.end());
    const auto& pred = it->predictions.at(pair["prediction"].get<std::size_t>());
    const auto& gt = it->ground_truth.at(pair["ground_truth"].get<std::size_t>());
    REQUIRE(pred.table);
    const double topo = grits_topology(*pred.table, gt.table);
    const double content = grits_content(*pred.table, gt.table);
    INFO(id);
    CHECK(std::abs(topo - pair["topology_factored"].get<double>()) <= 1e-12);
    CHECK(std::abs(content - pair["content_factored"].get<double>()) <= 1e-12);
    CHECK(topo <= pair["topology_exact"].get<double>() + 1e-12);
    CHECK(content <= pair["content_exact"].get<double>() + 1e-12);
  }
}
