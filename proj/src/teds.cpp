#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tabscore/structure_metrics.hpp"
#include "tabscore/text.hpp"

namespace tabscore {

TableTree TableTree::from_table(const TableGrid& table) {
  TableTree tree;
  auto& nodes = tree.nodes_;
  const auto& cells = table.cells();
  std::size_t k = 0;
  for (int r = 1; r <= table.n_rows(); ++r) {
    const std::size_t first = nodes.size();
    for (; k < cells.size() && cells[k].row == r; ++k) {
      const std::size_t index = nodes.size();
      nodes.push_back(Node{Tag::td, cells[k].extra_rows + 1, cells[k].extra_cols + 1,
                           text::decode_utf8(cells[k].content), index});
    }
    nodes.push_back(Node{Tag::tr, 1, 1, {}, first});
  }
  nodes.push_back(Node{Tag::table, 1, 1, {}, 0});
  return tree;
}

double normalized_levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(a.size());
}

namespace {

std::vector<std::size_t> keyroots(const std::vector<TableTree::Node>& nodes) {
  // a node is a keyroot when no later node shares its leftmost leaf
  std::vector<std::size_t> out;
  std::vector<char> seen(nodes.size(), 0);
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const std::size_t l = nodes[i].leftmost_leaf;
    if (!seen[l]) {
      seen[l] = 1;
      out.push_back(i);
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Interned cell contents so each distinct pair is compared once.
class RenameCost {
 public:
  RenameCost(const std::vector<TableTree::Node>& a, const std::vector<TableTree::Node>& b)
      : a_(a), b_(b), ids_a_(intern(a, unique_a_)), ids_b_(intern(b, unique_b_)),
        memo_(unique_a_.size() * unique_b_.size(), std::numeric_limits<double>::quiet_NaN()) {}

  double operator()(std::size_t x, std::size_t y) {
    const auto& u = a_[x];
    const auto& v = b_[y];
    if (u.tag != v.tag) return 1.0;
    if (u.tag != TableTree::Tag::td) return 0.0;
    if (u.rowspan != v.rowspan || u.colspan != v.colspan) return 1.0;
    double& slot = memo_[ids_a_[x] * unique_b_.size() + ids_b_[y]];
    if (std::isnan(slot)) slot = normalized_levenshtein(unique_a_[ids_a_[x]], unique_b_[ids_b_[y]]);
    return slot;
  }

 private:
  static std::vector<std::size_t> intern(const std::vector<TableTree::Node>& nodes,
                                         std::vector<std::u32string>& unique) {
    std::map<std::u32string, std::size_t> index;
    std::vector<std::size_t> ids(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto [it, inserted] = index.emplace(nodes[i].content, unique.size());
      if (inserted) unique.push_back(nodes[i].content);
      ids[i] = it->second;
    }
    return ids;
  }

  const std::vector<TableTree::Node>& a_;
  const std::vector<TableTree::Node>& b_;
  std::vector<std::u32string> unique_a_;
  std::vector<std::u32string> unique_b_;
  std::vector<std::size_t> ids_a_;
  std::vector<std::size_t> ids_b_;
  std::vector<double> memo_;
};

}  // namespace

// Zhang-Shasha keyroot dynamic program.
double tree_edit_distance(const TableTree& a, const TableTree& b) {
  const auto& na = a.nodes();
  const auto& nb = b.nodes();
  if (na.empty()) return static_cast<double>(nb.size());
  if (nb.empty()) return static_cast<double>(na.size());
  RenameCost rename(na, nb);
  const std::size_t cols = nb.size();
  std::vector<double> tree_dist(na.size() * cols, 0.0);
  std::vector<double> forest;

  for (std::size_t i : keyroots(na)) {
    for (std::size_t j : keyroots(nb)) {
      const std::size_t li = na[i].leftmost_leaf;
      const std::size_t lj = nb[j].leftmost_leaf;
      const std::size_t rows = i - li + 2;
      const std::size_t width = j - lj + 2;
      forest.assign(rows * width, 0.0);
      auto fd = [&](std::size_t r, std::size_t c) -> double& { return forest[r * width + c]; };
      for (std::size_t r = 1; r < rows; ++r) fd(r, 0) = fd(r - 1, 0) + 1.0;
      for (std::size_t c = 1; c < width; ++c) fd(0, c) = fd(0, c - 1) + 1.0;
      for (std::size_t x = li; x <= i; ++x) {
        const std::size_t r = x - li + 1;
        for (std::size_t y = lj; y <= j; ++y) {
          const std::size_t c = y - lj + 1;
          const double del = fd(r - 1, c) + 1.0;
          const double ins = fd(r, c - 1) + 1.0;
          if (na[x].leftmost_leaf == li && nb[y].leftmost_leaf == lj) {
            const double ren = fd(r - 1, c - 1) + rename(x, y);
            fd(r, c) = std::min({del, ins, ren});
            tree_dist[x * cols + y] = fd(r, c);
          } else {
            const double sub = fd(na[x].leftmost_leaf - li, nb[y].leftmost_leaf - lj) + tree_dist[x * cols + y];
            fd(r, c) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return tree_dist[(na.size() - 1) * cols + (nb.size() - 1)];
}

double teds(const TableTree& a, const TableTree& b) {
  const double denom = static_cast<double>(std::max(a.size(), b.size()));
  if (denom == 0) return 1.0;
  return std::clamp(1.0 - tree_edit_distance(a, b) / denom, 0.0, 1.0);
}

double teds(const TableGrid& a, const TableGrid& b) {
  return teds(TableTree::from_table(a), TableTree::from_table(b));
}

}  // namespace tabscore
