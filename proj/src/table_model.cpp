#include "tabscore/table_model.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "markup_reader.hpp"
#include "tabscore/errors.hpp"
#include "tabscore/text.hpp"

namespace tabscore {

TableGrid::TableGrid(int n_rows, int m_cols, std::vector<LogicalCell> cells)
    : n_rows_(n_rows), m_cols_(m_cols), cells_(std::move(cells)) {
  if (n_rows_ < 1 || m_cols_ < 1) {
    throw InvalidTableError("table shape must be at least 1x1, got " + std::to_string(n_rows_) + "x" +
                            std::to_string(m_cols_));
  }
  std::sort(cells_.begin(), cells_.end(), [](const LogicalCell& a, const LogicalCell& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  owner_.assign(static_cast<std::size_t>(n_rows_) * m_cols_, -1);
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const auto& c = cells_[k];
    if (c.row < 1 || c.col < 1 || c.extra_rows < 0 || c.extra_cols < 0 || c.last_row() > n_rows_ ||
        c.last_col() > m_cols_) {
      throw InvalidTableError("cell at (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                              ") leaves the " + std::to_string(n_rows_) + "x" + std::to_string(m_cols_) +
                              " grid");
    }
    for (int i = c.row; i <= c.last_row(); ++i) {
      for (int j = c.col; j <= c.last_col(); ++j) {
        int& slot = owner_[(i - 1) * m_cols_ + (j - 1)];
        if (slot != -1) {
          throw InvalidTableError("cells overlap at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        slot = static_cast<int>(k);
      }
    }
  }
}

std::size_t TableGrid::covered_positions() const {
  return static_cast<std::size_t>(std::count_if(owner_.begin(), owner_.end(), [](int o) { return o >= 0; }));
}

namespace {

TableGrid place_cells(const detail::MarkupTable& markup, std::vector<std::string>& warnings) {
  const int n = static_cast<int>(markup.rows.size());
  if (n == 0) throw EmptyTableError("table has no rows");

  int declared = 0;
  for (const auto& row : markup.rows) {
    int width = 0;
    for (const auto& cell : row) width += cell.colspan;
    declared = std::max(declared, width);
  }
  if (declared == 0) throw EmptyTableError("table has no cells");

  std::vector<char> occupied(static_cast<std::size_t>(n) * declared, 0);
  auto occ = [&](int r, int c) -> char& { return occupied[static_cast<std::size_t>(r) * declared + c]; };

  std::vector<LogicalCell> cells;
  int max_col = 0;
  for (int r = 0; r < n; ++r) {
    int col = 0;
    int index = 0;
    for (const auto& cell : markup.rows[r]) {
      ++index;
      while (col < declared && occ(r, col)) ++col;
      if (col >= declared) {
        warnings.push_back("row " + std::to_string(r + 1) + " cell " + std::to_string(index) +
                           " has no free grid position and was dropped");
        continue;
      }
      int colspan = 1;
      while (colspan < cell.colspan && col + colspan < declared && !occ(r, col + colspan)) ++colspan;
      if (colspan < cell.colspan) {
        warnings.push_back("row " + std::to_string(r + 1) + " cell " + std::to_string(index) + " colspan " +
                           std::to_string(cell.colspan) + " clamped to " + std::to_string(colspan));
      }
      int rowspan = std::min(cell.rowspan, n - r);
      if (rowspan < cell.rowspan) {
        warnings.push_back("row " + std::to_string(r + 1) + " cell " + std::to_string(index) + " rowspan " +
                           std::to_string(cell.rowspan) + " clamped to " + std::to_string(rowspan));
      }
      for (int i = r; i < r + rowspan; ++i) {
        for (int j = col; j < col + colspan; ++j) occ(i, j) = 1;
      }
      cells.push_back(LogicalCell{r + 1, col + 1, rowspan - 1, colspan - 1, text::collapse_whitespace(cell.text)});
      col += colspan;
      max_col = std::max(max_col, col);
    }
  }
  if (max_col == 0) throw EmptyTableError("table has no placeable cells");
  return TableGrid(n, max_col, std::move(cells));
}

void append_cell(std::string& out, int rowspan, int colspan, std::string_view content) {
  out += "<td";
  if (rowspan > 1) out += " rowspan=\"" + std::to_string(rowspan) + "\"";
  if (colspan > 1) out += " colspan=\"" + std::to_string(colspan) + "\"";
  out += ">";
  out += detail::escape_text(content);
  out += "</td>";
}

}  // namespace

ParsedTable parse_table(std::string_view markup) {
  auto tables = detail::read_tables(markup);
  if (tables.size() != 1) {
    throw ParseError("expected exactly one <table>, found " + std::to_string(tables.size()));
  }
  std::vector<std::string> warnings;
  TableGrid grid = place_cells(tables.front(), warnings);
  return ParsedTable{std::move(grid), std::move(warnings)};
}

TableGrid parse_table_markup(std::string_view markup) { return parse_table(markup).table; }

std::string normalize_markup(std::string_view markup) {
  std::string out;
  for (const auto& table : detail::read_tables(markup)) {
    out += "<table>";
    for (const auto& row : table.rows) {
      out += "<tr>";
      for (const auto& cell : row) append_cell(out, cell.rowspan, cell.colspan, cell.text);
      out += "</tr>";
    }
    out += "</table>";
  }
  return out;
}

std::string to_markup(const TableGrid& table) {
  const auto& cells = table.cells();
  std::vector<std::string> rows(table.n_rows());
  std::vector<int> declared(table.n_rows(), 0);
  std::vector<int> next(table.n_rows(), 1);
  std::size_t k = 0;
  for (int r = 1; r <= table.n_rows(); ++r) {
    auto& row = rows[r - 1];
    // holes before a cell are written as empty cells so placement is preserved
    for (; k < cells.size() && cells[k].row == r; ++k) {
      for (int c = next[r - 1]; c < cells[k].col; ++c) {
        if (table.owner(r, c) < 0) {
          row += "<td></td>";
          ++declared[r - 1];
        }
      }
      append_cell(row, cells[k].extra_rows + 1, cells[k].extra_cols + 1, cells[k].content);
      declared[r - 1] += cells[k].extra_cols + 1;
      next[r - 1] = cells[k].last_col() + 1;
    }
  }
  // the parser takes the widest declared row as the column count
  if (*std::max_element(declared.begin(), declared.end()) < table.m_cols()) {
    for (int c = next[0]; c <= table.m_cols(); ++c) rows[0] += "<td></td>";
  }
  std::string out = "<table>";
  for (const auto& row : rows) out += "<tr>" + row + "</tr>";
  return out + "</table>";
}

GridMatrix<TopologyEntry> grid_entries_topology(const TableGrid& table) {
  GridMatrix<TopologyEntry> out(table.n_rows(), table.m_cols(), TopologyEntry{0, 0, 0, 0});
  for (int a = 1; a <= table.n_rows(); ++a) {
    for (int b = 1; b <= table.m_cols(); ++b) {
      const int o = table.owner(a, b);
      if (o < 0) continue;
      const auto& c = table.cells()[o];
      out(a - 1, b - 1) = {c.row - a, c.col - b, c.row - a + c.extra_rows, c.col - b + c.extra_cols};
    }
  }
  return out;
}

GridMatrix<std::string> grid_entries_content(const TableGrid& table) {
  GridMatrix<std::string> out(table.n_rows(), table.m_cols());
  for (int a = 1; a <= table.n_rows(); ++a) {
    for (int b = 1; b <= table.m_cols(); ++b) {
      const int o = table.owner(a, b);
      if (o >= 0) out(a - 1, b - 1) = table.cells()[o].content;
    }
  }
  return out;
}

}  // namespace tabscore
