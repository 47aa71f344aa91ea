#include "tabscore/fixture.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "json.hpp"
#include "tabscore/table_model.hpp"

namespace tabscore {

namespace {

// mt19937_64 output is fixed by the standard; the mapping to ranges is done
// here so the stream does not depend on the library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  bool chance(double p) { return uniform() < p; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(integer(0, static_cast<int>(items.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

const std::vector<std::string> kWords{"Location", "Time", "Times", "Total", "Mean", "Depth (m)", "2021",
                                      "12.5",     "0.37", "n/a",   "Site A", "Site B", "σ",        "Δt",
                                      "Sample",   "pH",   "Layer", "Count",  "%",      "—"};

double round1(double x) { return std::round(x * 10.0) / 10.0; }

TableGrid random_table(Rng& rng, const FixtureOptions& opt) {
  const int n = rng.integer(1, opt.max_rows);
  const int m = rng.integer(1, opt.max_cols);
  std::vector<char> taken(static_cast<std::size_t>(n * m), 0);
  auto at = [&](int r, int c) -> char& { return taken[static_cast<std::size_t>((r - 1) * m + (c - 1))]; };
  std::vector<LogicalCell> cells;
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= m; ++c) {
      if (at(r, c)) continue;
      LogicalCell cell{r, c, 0, 0, rng.chance(0.1) ? std::string() : rng.pick(kWords)};
      if (rng.chance(opt.span_probability)) {
        if (rng.chance(0.5)) {
          if (c < m && !at(r, c + 1)) cell.extra_cols = 1;
        } else if (r < n) {
          cell.extra_rows = 1;
        }
      }
      for (int a = r; a <= cell.last_row(); ++a) {
        for (int b = c; b <= cell.last_col(); ++b) at(a, b) = 1;
      }
      cells.push_back(std::move(cell));
    }
  }
  return TableGrid(n, m, std::move(cells));
}

std::string corrupt(Rng& rng, const std::string& s) {
  if (s.empty()) return "x";
  std::string out = s;
  const auto k = static_cast<std::size_t>(rng.integer(0, static_cast<int>(out.size()) - 1));
  // keep the result valid UTF-8 by only touching ASCII bytes
  if (static_cast<unsigned char>(out[k]) < 0x80) {
    out[k] = out[k] == 'z' ? 'y' : 'z';
  } else {
    out += 'z';
  }
  return out;
}

// One structural or textual edit of a predicted table.
TableGrid perturb(Rng& rng, const TableGrid& t) {
  std::vector<LogicalCell> cells = t.cells();
  int n = t.n_rows();
  int m = t.m_cols();
  switch (rng.integer(0, 4)) {
    case 0:
      return t;
    case 1: {  // typo in one cell
      auto& cell = cells[static_cast<std::size_t>(rng.integer(0, static_cast<int>(cells.size()) - 1))];
      cell.content = corrupt(rng, cell.content);
      break;
    }
    case 2: {  // lose the last row
      if (n == 1) break;
      --n;
      std::vector<LogicalCell> kept;
      for (auto c : cells) {
        if (c.row > n) continue;
        c.extra_rows = std::min(c.extra_rows, n - c.row);
        kept.push_back(std::move(c));
      }
      cells = std::move(kept);
      break;
    }
    case 3: {  // split every span into simple cells
      std::vector<LogicalCell> split;
      for (const auto& c : cells) {
        for (int a = c.row; a <= c.last_row(); ++a) {
          for (int b = c.col; b <= c.last_col(); ++b) {
            split.push_back(LogicalCell{a, b, 0, 0, a == c.row && b == c.col ? c.content : std::string()});
          }
        }
      }
      cells = std::move(split);
      break;
    }
    default: {  // extra empty column on the right
      ++m;
      break;
    }
  }
  return TableGrid(n, m, std::move(cells));
}

nlohmann::json box_json(double x0, double y0, double x1, double y1) {
  return nlohmann::json::array({round1(x0), round1(y0), round1(x1), round1(y1)});
}

}  // namespace

std::string generate_fixture(std::uint64_t seed, const FixtureOptions& opt) {
  Rng rng(seed);
  std::string out;
  for (int page = 0; page < opt.pages; ++page) {
    nlohmann::json rec;
    rec["page_id"] = fmt::format("page-{:04d}", page);
    rec["width"] = opt.page_width;
    rec["height"] = opt.page_height;
    rec["ground_truth"] = nlohmann::json::array();
    rec["predictions"] = nlohmann::json::array();
    rec["tokens"] = nlohmann::json::array();

    const int tables = rng.chance(0.1) ? 0 : rng.integer(1, 3);
    const double slot = opt.page_height / std::max(tables, 1);
    for (int k = 0; k < tables; ++k) {
      const double x0 = rng.uniform(20, opt.page_width * 0.3);
      const double x1 = rng.uniform(opt.page_width * 0.6, opt.page_width - 20);
      const double y0 = k * slot + rng.uniform(10, slot * 0.2);
      const double y1 = (k + 1) * slot - rng.uniform(10, slot * 0.2);
      const TableGrid gt = random_table(rng, opt);
      rec["ground_truth"].push_back({{"bbox", box_json(x0, y0, x1, y1)}, {"markup", to_markup(gt)}});

      const double cx = 0.5 * (x0 + x1);
      const double cy = 0.5 * (y0 + y1);
      rec["tokens"].push_back({{"bbox", box_json(cx - 20, cy - 5, cx + 20, cy + 5)}, {"text", rng.pick(kWords)}});

      if (rng.chance(0.15)) continue;  // missed table
      // jitter as a fraction of the box size; larger jitter, lower confidence
      const double jitter = rng.uniform(0.0, 0.45);
      const double w = x1 - x0;
      const double h = y1 - y0;
      const double px0 = std::clamp(x0 + rng.uniform(-jitter, jitter) * w, 0.0, opt.page_width);
      const double py0 = std::clamp(y0 + rng.uniform(-jitter, jitter) * h, 0.0, opt.page_height);
      const double px1 = std::clamp(x1 + rng.uniform(-jitter, jitter) * w, px0, opt.page_width);
      const double py1 = std::clamp(y1 + rng.uniform(-jitter, jitter) * h, py0, opt.page_height);
      const double conf = std::clamp(std::round((1.0 - jitter + rng.uniform(-0.15, 0.15)) * 20.0) / 20.0, 0.0, 1.0);
      std::string markup = to_markup(perturb(rng, gt));
      if (rng.chance(0.03)) {  // truncated model output, cut on a character boundary
        std::size_t cut = markup.size() / 2;
        while (cut > 0 && (static_cast<unsigned char>(markup[cut]) & 0xC0) == 0x80) --cut;
        markup.resize(cut);
      }
      rec["predictions"].push_back({{"bbox", box_json(px0, py0, px1, py1)}, {"markup", markup}, {"confidence", conf}});
    }

    if (rng.chance(0.3)) {  // spurious detection
      const double x0 = rng.uniform(0, opt.page_width * 0.5);
      const double y0 = rng.uniform(0, opt.page_height * 0.8);
      const double x1 = x0 + rng.uniform(50, opt.page_width * 0.4);
      const double y1 = y0 + rng.uniform(30, opt.page_height * 0.15);
      const double conf = std::round(rng.uniform(0.05, 0.7) * 20.0) / 20.0;
      rec["predictions"].push_back({{"bbox", box_json(x0, y0, x1, y1)},
                                    {"markup", to_markup(random_table(rng, opt))},
                                    {"confidence", conf}});
    }
    out += rec.dump() + "\n";
  }
  return out;
}

}  // namespace tabscore
