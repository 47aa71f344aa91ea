#pragma once

// Table structure recognition scores: TEDS over table trees and GriTS over
// grid entry matrices.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tabscore/table_model.hpp"

namespace tabscore {

/// Ordered tree <table> -> <tr>* -> <td>*, stored in postorder.
class TableTree {
 public:
  enum class Tag { table, tr, td };

  struct Node {
    Tag tag;
    int rowspan = 1;
    int colspan = 1;
    std::u32string content;
    std::size_t leftmost_leaf = 0;  // postorder index of the leftmost leaf of the subtree
  };

  /// One <tr> per grid row holding the cells that start in that row.
  static TableTree from_table(const TableGrid& table);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  std::vector<Node> nodes_;
};

/// Levenshtein distance divided by the longer length; 0 for two empty
/// strings.
double normalized_levenshtein(std::u32string_view a, std::u32string_view b);

/// Ordered tree edit distance: insert and delete cost 1, relabeling between
/// tags costs 1, td to td costs 1 when spans differ and otherwise the
/// normalized Levenshtein distance between contents.
double tree_edit_distance(const TableTree& a, const TableTree& b);

/// 1 - EditDist / max(|a|, |b|).
double teds(const TableTree& a, const TableTree& b);
double teds(const TableGrid& a, const TableGrid& b);

/// Row and column selections of a 2D most-similar-substructure search.
/// Selected rows/columns are increasing and pairwise aligned.
struct Substructure {
  std::vector<std::size_t> p_rows;
  std::vector<std::size_t> g_rows;
  std::vector<std::size_t> p_cols;
  std::vector<std::size_t> g_cols;
};

struct MssResult {
  double total = 0.0;  // sum of f over the aligned entries
  double score = 0.0;  // 2 * total / (|P| + |G|)
  Substructure selection;
};

/// Entry-pair similarity on positions (p_row, p_col, g_row, g_col), in [0,1].
using EntryScore = std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>;

/// Factored 2D-MSS: align columns by weighted LCS where a column pair is
/// rewarded with the 1D alignment score of the two columns, then align rows
/// exactly given those columns; repeat with rows first and keep the better.
/// The result is always attainable, so it never exceeds the exact optimum.
MssResult factored_2dmss(std::size_t p_rows, std::size_t p_cols, std::size_t g_rows, std::size_t g_cols,
                         const EntryScore& f);

/// Exhaustive 2D-MSS over every pair of equal-size row and column
/// subsequences. Throws TooLargeError when either matrix exceeds 4x4.
MssResult exact_2dmss(std::size_t p_rows, std::size_t p_cols, std::size_t g_rows, std::size_t g_cols,
                      const EntryScore& f);

/// IoU of two relative-extent rectangles (a, b, c, d) covering rows [a..c]
/// and columns [b..d].
double topology_iou(const TopologyEntry& a, const TopologyEntry& b);

/// 2 * |LCS| / (|a| + |b|) over scalar values; 1 for two empty strings.
double lcs_similarity(std::u32string_view a, std::u32string_view b);

/// GriTS with memoized entry scores; identical entries share one evaluation.
double grits(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g);
double grits(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g);

double grits_topology(const TableGrid& p, const TableGrid& g);
double grits_content(const TableGrid& p, const TableGrid& g);

MssResult exact_2dmss(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g);
MssResult exact_2dmss(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g);
MssResult factored_2dmss(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g);
MssResult factored_2dmss(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g);

}  // namespace tabscore
