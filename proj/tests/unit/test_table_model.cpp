#include <random>
#include <set>

#include "doctest.h"
#include "random_tables.hpp"
#include "tabscore/errors.hpp"
#include "tabscore/table_model.hpp"
#include "tabscore/text.hpp"

using namespace tabscore;

namespace {

const char* kFigureOne =
    "<table>"
    "<tr><td>a</td><td>b</td><td>c</td><td>d</td></tr>"
    "<tr><td>e</td><td rowspan=\"2\">f</td><td>g</td><td>h</td></tr>"
    "<tr><td>i</td><td colspan=\"2\">j</td></tr>"
    "</table>";

}  // namespace

TEST_CASE("simple row parses to a 1x2 grid") {
  const TableGrid t = parse_table_markup("<table><tr><td>a</td><td>b</td></tr></table>");
  CHECK(t.n_rows() == 1);
  CHECK(t.m_cols() == 2);
  REQUIRE(t.cells().size() == 2);
  CHECK(t.cells()[0] == LogicalCell{1, 1, 0, 0, "a"});
  CHECK(t.cells()[1] == LogicalCell{1, 2, 0, 0, "b"});
}

TEST_CASE("figure-one layout places spanning cells") {
  const TableGrid t = parse_table_markup(kFigureOne);
  CHECK(t.n_rows() == 3);
  CHECK(t.m_cols() == 4);
  CHECK(t.cells().size() == 10);
  const auto& cells = t.cells();
  const LogicalCell& f = cells[t.owner(3, 2)];
  CHECK(f == LogicalCell{2, 2, 1, 0, "f"});
  const LogicalCell& j = cells[t.owner(3, 4)];
  CHECK(j == LogicalCell{3, 3, 0, 1, "j"});
  CHECK(t.covered_positions() == 12);
}

TEST_CASE("cells with no free position are dropped with a warning") {
  const ParsedTable p = parse_table(
      "<table><tr><td rowspan=\"2\">a</td><td rowspan=\"2\">b</td></tr><tr><td>c</td><td>d</td></tr></table>");
  CHECK(p.table.n_rows() == 2);
  CHECK(p.table.m_cols() == 2);
  CHECK(p.table.cells().size() == 2);
  CHECK(p.warnings.size() == 2);
}

TEST_CASE("spans leaving the grid are clamped") {
  const ParsedTable rows = parse_table("<table><tr><td rowspan=\"5\">a</td><td>b</td></tr></table>");
  CHECK(rows.table.cells()[0].extra_rows == 0);
  CHECK(rows.warnings.size() == 1);

  const ParsedTable cols = parse_table(
      "<table><tr><td>a</td><td rowspan=\"2\">b</td></tr><tr><td colspan=\"2\">c</td></tr></table>");
  CHECK(cols.table.m_cols() == 2);
  CHECK(cols.table.cells().back() == LogicalCell{2, 1, 0, 0, "c"});
  CHECK(cols.warnings.size() == 1);
}

TEST_CASE("ragged rows leave implicit empty positions") {
  const TableGrid t = parse_table_markup("<table><tr><td>a</td></tr><tr><td>b</td><td>c</td></tr></table>");
  CHECK(t.m_cols() == 2);
  CHECK(t.owner(1, 2) == -1);
  CHECK(grid_entries_content(t)(0, 1).empty());
  CHECK(grid_entries_topology(t)(0, 1) == TopologyEntry{0, 0, 0, 0});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_table_markup("<table><tr><td>a</tr></table>"), ParseError);
  CHECK_THROWS_AS(parse_table_markup("<table><tr><td>a</td></tr>"), ParseError);
  CHECK_THROWS_AS(parse_table_markup("<table><tr><td><table><tr><td>x</td></tr></table></td></tr></table>"),
                  ParseError);
  CHECK_THROWS_AS(parse_table_markup("<table><td>a</td></table>"), ParseError);
  CHECK_THROWS_AS(parse_table_markup("<p>no table here</p>"), NoTableError);
  CHECK_THROWS_AS(parse_table_markup("<table></table>"), EmptyTableError);
  CHECK_THROWS_AS(parse_table_markup("<table><tr></tr></table>"), EmptyTableError);
  CHECK_THROWS_AS(parse_table_markup("<table><tr><td>a</td></tr></table><table><tr><td>b</td></tr></table>"),
                  ParseError);
}

TEST_CASE("cell text: whitespace collapsed, entities decoded, inline tags dropped") {
  const TableGrid t =
      parse_table_markup("<table><tr><td>  a \n\t b  </td><td>x &amp; <b>y</b>&lt;z&#62;</td></tr></table>");
  CHECK(t.cells()[0].content == "a b");
  CHECK(t.cells()[1].content == "x & y<z>");
}

TEST_CASE("content length counts scalar values") {
  const TableGrid t = parse_table_markup("<table><tr><td>Δt σ</td></tr></table>");
  CHECK(text::scalar_length(t.cells()[0].content) == 4);
}

TEST_CASE("th and section wrappers") {
  const TableGrid t = parse_table_markup(
      "<table><caption>Cap</caption><thead><tr><th>h</th></tr></thead><tbody><tr><td>v</td></tr></tbody></table>");
  CHECK(t.n_rows() == 2);
  CHECK(t.cells()[0].content == "h");
  CHECK(t.cells()[1].content == "v");
}

TEST_CASE("normalize_markup") {
  CHECK(normalize_markup("<table><thead><tr><td>h</td></tr></thead></table>") == "<table><tr><td>h</td></tr></table>");
  CHECK(normalize_markup("<table><tr><td colspan=\"2\" style=\"x\">v</td></tr></table>") ==
        "<table><tr><td colspan=\"2\">v</td></tr></table>");
  CHECK(normalize_markup("<TABLE border=1><TR class=r><TH rowspan='3' colspan=1>A</TH></TR></TABLE>") ==
        "<table><tr><td rowspan=\"3\">A</td></tr></table>");
  CHECK(normalize_markup("<div><table><tr><td>a &amp; b</td></tr></table></div>") ==
        "<table><tr><td>a &amp; b</td></tr></table>");
  CHECK_THROWS_AS(normalize_markup("<div>nothing</div>"), NoTableError);
  CHECK_THROWS_AS(normalize_markup("<table><tr><td>x</td>"), ParseError);
}

TEST_CASE("normalize_markup is idempotent") {
  const std::vector<std::string> inputs{
      kFigureOne,
      "<table><tr><td>a</td></tr></table>",
      "<html><body><table class='t'><thead><tr><th>x</th><th colspan=2>y</th></tr></thead>"
      "<tbody><tr><td>1 &lt; 2</td><td> </td><td>z</td></tr></tbody></table></body></html>",
  };
  for (const auto& in : inputs) {
    const std::string once = normalize_markup(in);
    CHECK(normalize_markup(once) == once);
  }
}

TEST_CASE("topology entries") {
  CHECK(grid_entries_topology(parse_table_markup("<table><tr><td>x</td></tr></table>"))(0, 0) ==
        TopologyEntry{0, 0, 0, 0});
  const auto e = grid_entries_topology(parse_table_markup(kFigureOne));
  CHECK(e(2, 1) == TopologyEntry{-1, 0, 0, 0});
  CHECK(e(2, 2) == TopologyEntry{0, 0, 0, 1});
  CHECK(e(2, 3) == TopologyEntry{0, -1, 0, 0});
  CHECK(e(1, 1) == TopologyEntry{0, 0, 1, 0});
}

TEST_CASE("content entries replicate spanning content") {
  const auto two = grid_entries_content(parse_table_markup("<table><tr><td>a</td><td>b</td></tr></table>"));
  CHECK(two(0, 0) == "a");
  CHECK(two(0, 1) == "b");
  const auto span = grid_entries_content(TableGrid(1, 2, {LogicalCell{1, 1, 0, 1, "x"}}));
  CHECK(span(0, 0) == "x");
  CHECK(span(0, 1) == "x");
}

TEST_CASE("TableGrid rejects invalid cells") {
  CHECK_THROWS_AS(TableGrid(0, 1, {}), InvalidTableError);
  CHECK_THROWS_AS(TableGrid(1, 1, {LogicalCell{1, 1, 0, 1, ""}}), InvalidTableError);
  CHECK_THROWS_AS(TableGrid(2, 2, {LogicalCell{1, 1, 1, 1, ""}, LogicalCell{2, 2, 0, 0, ""}}), InvalidTableError);
  CHECK_THROWS_AS(TableGrid(1, 1, {LogicalCell{0, 1, 0, 0, ""}}), InvalidTableError);
}

TEST_CASE("round trip parse . serialize . parse") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> alphabet{"", "a", "b c", "x&y", "<", "Δ"};
  for (int k = 0; k < 300; ++k) {
    const TableGrid t = testing::random_table(rng, 5, 5, alphabet, 0.3);
    const ParsedTable once = parse_table(to_markup(t));
    CHECK(once.warnings.empty());
    CHECK(once.table == t);
    CHECK(parse_table_markup(to_markup(once.table)) == once.table);
    CHECK(normalize_markup(to_markup(t)) == to_markup(t));
  }
}

TEST_CASE("grids with holes serialize to an equivalent grid") {
  // hole at (1,2) under no cell, and a hole before the only row-2 cell
  const TableGrid t(2, 3, {LogicalCell{1, 1, 1, 0, "a"}, LogicalCell{2, 3, 0, 0, "c"}});
  const TableGrid back = parse_table_markup(to_markup(t));
  CHECK(back.n_rows() == 2);
  CHECK(back.m_cols() == 3);
  CHECK(grid_entries_content(back) == grid_entries_content(t));
  CHECK(grid_entries_topology(back) == grid_entries_topology(t));
}

TEST_CASE("parsed cells are disjoint, inside the grid, and cover sum (r+1)(c+1)") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> tags{"<td>x</td>", "<td rowspan=\"2\">y</td>", "<td colspan=\"3\">z</td>",
                                      "<td rowspan=\"3\" colspan=\"2\">w</td>", "<th>h</th>"};
  for (int k = 0; k < 300; ++k) {
    std::string markup = "<table>";
    const int rows = testing::uniform_int(rng, 1, 4);
    for (int r = 0; r < rows; ++r) {
      markup += "<tr>";
      const int n = testing::uniform_int(rng, 1, 4);
      for (int c = 0; c < n; ++c) markup += tags[static_cast<std::size_t>(testing::uniform_int(rng, 0, 4))];
      markup += "</tr>";
    }
    markup += "</table>";
    const TableGrid t = parse_table_markup(markup);
    std::set<std::pair<int, int>> seen;
    std::size_t area = 0;
    for (const auto& c : t.cells()) {
      CHECK(c.row >= 1);
      CHECK(c.col >= 1);
      CHECK(c.last_row() <= t.n_rows());
      CHECK(c.last_col() <= t.m_cols());
      area += static_cast<std::size_t>((c.extra_rows + 1) * (c.extra_cols + 1));
      for (int i = c.row; i <= c.last_row(); ++i) {
        for (int j = c.col; j <= c.last_col(); ++j) CHECK(seen.insert({i, j}).second);
      }
    }
    CHECK(area == t.covered_positions());
    CHECK(area <= static_cast<std::size_t>(t.n_rows() * t.m_cols()));
  }
}
