#pragma once

// Tolerant reader that extracts table/row/cell structure from HTML-like
// markup. Shared by parsing and normalization.

#include <string>
#include <string_view>
#include <vector>

namespace tabscore::detail {

struct MarkupCell {
  int rowspan = 1;
  int colspan = 1;
  std::string text;  // decoded, inline tags removed, whitespace untouched
};

using MarkupRow = std::vector<MarkupCell>;

struct MarkupTable {
  std::vector<MarkupRow> rows;
};

/// All top-level tables in document order. Throws ParseError on malformed
/// structure (unclosed or mismatched table/row/cell tags, nested tables,
/// cells outside rows).
std::vector<MarkupTable> read_tables(std::string_view markup);

std::string escape_text(std::string_view text);

}  // namespace tabscore::detail
