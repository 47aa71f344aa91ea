#pragma once

// Logical table model: cells (i, j, r, c) on an n x m grid, markup parsing
// and normalization, and the per-position entry matrices used by GriTS.

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tabscore {

/// One logical cell. Row and column are 1-based; the cell covers rows
/// [row, row + extra_rows] and columns [col, col + extra_cols].
struct LogicalCell {
  int row = 1;
  int col = 1;
  int extra_rows = 0;
  int extra_cols = 0;
  std::string content;

  int last_row() const { return row + extra_rows; }
  int last_col() const { return col + extra_cols; }
  bool is_simple() const { return extra_rows == 0 && extra_cols == 0; }

  friend bool operator==(const LogicalCell&, const LogicalCell&) = default;
};

/// Dense row-major matrix.
template <class T>
class GridMatrix {
 public:
  GridMatrix() = default;
  GridMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const GridMatrix&, const GridMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// A validated logical table. Cells are kept sorted row-major by their
/// top-left position; positions not covered by any cell are implicit empty
/// cells.
class TableGrid {
 public:
  /// Throws InvalidTableError when the shape is below 1x1, a cell leaves the
  /// grid, or two cells overlap.
  TableGrid(int n_rows, int m_cols, std::vector<LogicalCell> cells);

  int n_rows() const { return n_rows_; }
  int m_cols() const { return m_cols_; }
  const std::vector<LogicalCell>& cells() const { return cells_; }

  /// Index into cells() of the cell covering the 1-based position, or -1.
  int owner(int row, int col) const { return owner_[(row - 1) * m_cols_ + (col - 1)]; }

  std::size_t covered_positions() const;

  friend bool operator==(const TableGrid& a, const TableGrid& b) {
    return a.n_rows_ == b.n_rows_ && a.m_cols_ == b.m_cols_ && a.cells_ == b.cells_;
  }

 private:
  int n_rows_;
  int m_cols_;
  std::vector<LogicalCell> cells_;
  std::vector<int> owner_;
};

struct ParsedTable {
  TableGrid table;
  /// Recoverable irregularities (clamped spans, dropped cells).
  std::vector<std::string> warnings;
};

/// Parses markup holding exactly one table into a grid. Rowspan/colspan
/// occupancy follows the HTML placement rule; the column count is the
/// widest row's declared width, spans that leave the grid are clamped and
/// cells with no free position are dropped, both with a warning.
/// Throws NoTableError, ParseError or EmptyTableError.
ParsedTable parse_table(std::string_view markup);

/// parse_table without the warnings.
TableGrid parse_table_markup(std::string_view markup);

/// Rewrites markup using only <table>, <tr> and <td>, keeping rowspan and
/// colspan (when > 1) and the cell text. Idempotent. Throws NoTableError
/// when no table is present and ParseError on malformed markup.
std::string normalize_markup(std::string_view markup);

/// Serializes a grid in normalized form: lowercase tags, spans only when
/// greater than one, no whitespace between tags.
std::string to_markup(const TableGrid& table);

/// Relative extent (i - a, j - b, i - a + r, j - b + c) of the cell owning
/// each position; (0, 0, 0, 0) for implicit empty positions.
using TopologyEntry = std::array<int, 4>;
GridMatrix<TopologyEntry> grid_entries_topology(const TableGrid& table);

/// Owning cell's content at every covered position, "" elsewhere.
GridMatrix<std::string> grid_entries_content(const TableGrid& table);

}  // namespace tabscore
