#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tabscore/errors.hpp"
#include "tabscore/structure_metrics.hpp"
#include "tabscore/text.hpp"

namespace tabscore {

double topology_iou(const TopologyEntry& a, const TopologyEntry& b) {
  auto area = [](const TopologyEntry& e) {
    return static_cast<double>(e[2] - e[0] + 1) * static_cast<double>(e[3] - e[1] + 1);
  };
  const int rows = std::min(a[2], b[2]) - std::max(a[0], b[0]) + 1;
  const int cols = std::min(a[3], b[3]) - std::max(a[1], b[1]) + 1;
  const double inter = rows > 0 && cols > 0 ? static_cast<double>(rows) * cols : 0.0;
  return inter / (area(a) + area(b) - inter);
}

double lcs_similarity(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return 2.0 * static_cast<double>(prev[b.size()]) / static_cast<double>(a.size() + b.size());
}

namespace {

struct Alignment {
  double score = 0.0;
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
};

// Weighted LCS between two index sequences.
template <class Reward>
Alignment align_1d(std::size_t n, std::size_t m, Reward&& reward) {
  std::vector<double> dp((n + 1) * (m + 1), 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dp[i * (m + 1) + j]; };
  std::vector<double> w(n * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) w[i * m + j] = reward(i, j);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::max({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1) + w[(i - 1) * m + (j - 1)]});
    }
  }
  Alignment out;
  out.score = at(n, m);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 && j > 0) {
    if (at(i, j) == at(i - 1, j)) {
      --i;
    } else if (at(i, j) == at(i, j - 1)) {
      --j;
    } else {
      out.left.push_back(i - 1);
      out.right.push_back(j - 1);
      --i;
      --j;
    }
  }
  std::reverse(out.left.begin(), out.left.end());
  std::reverse(out.right.begin(), out.right.end());
  return out;
}

double grits_score(double total, std::size_t p_cells, std::size_t g_cells) {
  const double denom = static_cast<double>(p_cells + g_cells);
  if (denom == 0) return 1.0;
  return std::clamp(2.0 * total / denom, 0.0, 1.0);
}

// Columns first, then rows given the column alignment. `transpose` swaps
// the roles of rows and columns.
MssResult factored_pass(std::size_t p_rows, std::size_t p_cols, std::size_t g_rows, std::size_t g_cols,
                        const EntryScore& f, bool transpose) {
  auto score = [&](std::size_t pr, std::size_t pc, std::size_t gr, std::size_t gc) {
    return transpose ? f(pc, pr, gc, gr) : f(pr, pc, gr, gc);
  };
  const std::size_t pr_n = transpose ? p_cols : p_rows;
  const std::size_t pc_n = transpose ? p_rows : p_cols;
  const std::size_t gr_n = transpose ? g_cols : g_rows;
  const std::size_t gc_n = transpose ? g_rows : g_cols;

  const Alignment cols = align_1d(pc_n, gc_n, [&](std::size_t pc, std::size_t gc) {
    return align_1d(pr_n, gr_n, [&](std::size_t pr, std::size_t gr) { return score(pr, pc, gr, gc); }).score;
  });
  const Alignment rows = align_1d(pr_n, gr_n, [&](std::size_t pr, std::size_t gr) {
    double sum = 0.0;
    for (std::size_t k = 0; k < cols.left.size(); ++k) sum += score(pr, cols.left[k], gr, cols.right[k]);
    return sum;
  });

  MssResult out;
  out.total = rows.score;
  out.score = grits_score(out.total, p_rows * p_cols, g_rows * g_cols);
  if (transpose) {
    out.selection = Substructure{cols.left, cols.right, rows.left, rows.right};
  } else {
    out.selection = Substructure{rows.left, rows.right, cols.left, cols.right};
  }
  return out;
}

std::vector<std::vector<std::size_t>> subsequences(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) pick.push_back(i);
    }
    out.push_back(std::move(pick));
  }
  return out;
}

constexpr std::size_t kExactCap = 4;

// Memoized entry scores over interned entries.
template <class Entry, class Score>
class EntryTable {
 public:
  EntryTable(const GridMatrix<Entry>& p, const GridMatrix<Entry>& g, Score score)
      : p_(p), g_(g), score_(std::move(score)) {
    p_ids_ = intern(p, p_unique_);
    g_ids_ = intern(g, g_unique_);
    memo_.assign(p_unique_.size() * g_unique_.size(), std::numeric_limits<double>::quiet_NaN());
  }

  double operator()(std::size_t pr, std::size_t pc, std::size_t gr, std::size_t gc) {
    const std::size_t a = p_ids_[pr * p_.cols() + pc];
    const std::size_t b = g_ids_[gr * g_.cols() + gc];
    double& slot = memo_[a * g_unique_.size() + b];
    if (std::isnan(slot)) slot = score_(p_unique_[a], g_unique_[b]);
    return slot;
  }

  EntryScore as_function() {
    return [this](std::size_t pr, std::size_t pc, std::size_t gr, std::size_t gc) { return (*this)(pr, pc, gr, gc); };
  }

 private:
  template <class Unique>
  static std::vector<std::size_t> intern(const GridMatrix<Entry>& m, Unique& unique) {
    std::map<Entry, std::size_t> index;
    std::vector<std::size_t> ids(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto [it, inserted] = index.emplace(m.data()[i], unique.size());
      if (inserted) unique.push_back(convert(m.data()[i]));
      ids[i] = it->second;
    }
    return ids;
  }

  static auto convert(const Entry& e) {
    if constexpr (std::is_same_v<Entry, std::string>) {
      return text::decode_utf8(e);
    } else {
      return e;
    }
  }

  using Stored = decltype(convert(std::declval<const Entry&>()));

  const GridMatrix<Entry>& p_;
  const GridMatrix<Entry>& g_;
  Score score_;
  std::vector<Stored> p_unique_;
  std::vector<Stored> g_unique_;
  std::vector<std::size_t> p_ids_;
  std::vector<std::size_t> g_ids_;
  std::vector<double> memo_;
};

auto topology_table(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g) {
  auto score = [](const TopologyEntry& a, const TopologyEntry& b) { return topology_iou(a, b); };
  return EntryTable<TopologyEntry, decltype(score)>(p, g, score);
}

auto content_table(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g) {
  auto score = [](const std::u32string& a, const std::u32string& b) { return lcs_similarity(a, b); };
  return EntryTable<std::string, decltype(score)>(p, g, score);
}

}  // namespace

MssResult factored_2dmss(std::size_t p_rows, std::size_t p_cols, std::size_t g_rows, std::size_t g_cols,
                         const EntryScore& f) {
  MssResult cols_first = factored_pass(p_rows, p_cols, g_rows, g_cols, f, false);
  MssResult rows_first = factored_pass(p_rows, p_cols, g_rows, g_cols, f, true);
  return rows_first.total > cols_first.total ? rows_first : cols_first;
}

MssResult exact_2dmss(std::size_t p_rows, std::size_t p_cols, std::size_t g_rows, std::size_t g_cols,
                      const EntryScore& f) {
  if (p_rows > kExactCap || p_cols > kExactCap || g_rows > kExactCap || g_cols > kExactCap) {
    throw TooLargeError("exact 2D-MSS is limited to 4x4 matrices");
  }
  MssResult best;
  for (std::size_t kr = 1; kr <= std::min(p_rows, g_rows); ++kr) {
    const auto pr_sets = subsequences(p_rows, kr);
    const auto gr_sets = subsequences(g_rows, kr);
    for (std::size_t kc = 1; kc <= std::min(p_cols, g_cols); ++kc) {
      const auto pc_sets = subsequences(p_cols, kc);
      const auto gc_sets = subsequences(g_cols, kc);
      for (const auto& pr : pr_sets) {
        for (const auto& gr : gr_sets) {
          for (const auto& pc : pc_sets) {
            for (const auto& gc : gc_sets) {
              double total = 0.0;
              for (std::size_t a = 0; a < kr; ++a) {
                for (std::size_t b = 0; b < kc; ++b) total += f(pr[a], pc[b], gr[a], gc[b]);
              }
              if (total > best.total) {
                best.total = total;
                best.selection = Substructure{pr, gr, pc, gc};
              }
            }
          }
        }
      }
    }
  }
  best.score = grits_score(best.total, p_rows * p_cols, g_rows * g_cols);
  return best;
}

MssResult factored_2dmss(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g) {
  auto table = topology_table(p, g);
  return factored_2dmss(p.rows(), p.cols(), g.rows(), g.cols(), table.as_function());
}

MssResult factored_2dmss(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g) {
  auto table = content_table(p, g);
  return factored_2dmss(p.rows(), p.cols(), g.rows(), g.cols(), table.as_function());
}

MssResult exact_2dmss(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g) {
  auto table = topology_table(p, g);
  return exact_2dmss(p.rows(), p.cols(), g.rows(), g.cols(), table.as_function());
}

MssResult exact_2dmss(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g) {
  auto table = content_table(p, g);
  return exact_2dmss(p.rows(), p.cols(), g.rows(), g.cols(), table.as_function());
}

double grits(const GridMatrix<TopologyEntry>& p, const GridMatrix<TopologyEntry>& g) {
  return factored_2dmss(p, g).score;
}

double grits(const GridMatrix<std::string>& p, const GridMatrix<std::string>& g) {
  return factored_2dmss(p, g).score;
}

double grits_topology(const TableGrid& p, const TableGrid& g) {
  return grits(grid_entries_topology(p), grid_entries_topology(g));
}

double grits_content(const TableGrid& p, const TableGrid& g) {
  return grits(grid_entries_content(p), grid_entries_content(g));
}

}  // namespace tabscore
