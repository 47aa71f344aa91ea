#include "tabscore/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "tabscore/errors.hpp"

namespace tabscore {

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

namespace {

std::vector<std::size_t> by_confidence(std::span<const ScoredBox> boxes) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return boxes[a].confidence > boxes[b].confidence; });
  return order;
}

}  // namespace

std::vector<std::size_t> nms(std::span<const ScoredBox> boxes, double iou_threshold) {
  const auto order = by_confidence(boxes);
  std::vector<char> suppressed(boxes.size(), 0);
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (suppressed[a]) continue;
    const auto& top = boxes[order[a]].bbox;
    kept.push_back(order[a]);
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (!suppressed[b] && iou(top, boxes[order[b]].bbox) > iou_threshold) suppressed[b] = 1;
    }
  }
  return kept;
}

std::vector<std::size_t> top_k(std::span<const ScoredBox> boxes, std::size_t k) {
  auto order = by_confidence(boxes);
  if (order.size() > k) order.resize(k);
  return order;
}

std::vector<std::size_t> filter_empty(std::span<const BBox> boxes, std::span<const Token> tokens) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const bool any = std::any_of(tokens.begin(), tokens.end(), [&](const Token& t) {
      return boxes[i].contains(t.bbox.center_x(), t.bbox.center_y());
    });
    if (any) kept.push_back(i);
  }
  return kept;
}

Orientation detect_rotation(std::span<const Token> tokens_in_box) {
  if (tokens_in_box.empty()) throw InsufficientEvidenceError("no tokens to estimate table orientation");
  double w = 0;
  double h = 0;
  for (const auto& t : tokens_in_box) {
    w += t.bbox.width();
    h += t.bbox.height();
  }
  if (w <= 0 && h <= 0) throw InsufficientEvidenceError("all tokens have zero extent");
  // means share the same denominator, so the ratio of sums is the ratio of means
  return w >= h ? Orientation::upright : Orientation::rotated;
}

BBox pad_box(const BBox& box, double pad, double page_width, double page_height) {
  return BBox{std::max(0.0, box.x0 - pad), std::max(0.0, box.y0 - pad), std::min(page_width, box.x1 + pad),
              std::min(page_height, box.y1 + pad)};
}

PixelPage::PixelPage(int width, int height, std::vector<std::uint8_t> ink)
    : width_(width), height_(height), ink_(std::move(ink)) {
  if (width_ < 0 || height_ < 0 || ink_.size() != static_cast<std::size_t>(width_) * height_) {
    throw InputError("pixel mask size does not match " + std::to_string(width_) + "x" + std::to_string(height_));
  }
}

PixelPage binarize(const GrayImage& image, double luminance_threshold) {
  std::vector<std::uint8_t> ink(image.pixels.size());
  for (std::size_t i = 0; i < ink.size(); ++i) {
    ink[i] = (image.pixels[i] / 255.0) < luminance_threshold ? 1 : 0;
  }
  return PixelPage(image.width, image.height, std::move(ink));
}

namespace {

// Half-open pixel rectangle.
struct Region {
  int x0, y0, x1, y1;
  long long area() const { return static_cast<long long>(x1 - x0) * (y1 - y0); }
};

// Shrinks a region to the bounding box of its ink; false when it has none.
bool tighten(const PixelPage& page, Region& r) {
  int x0 = r.x1, y0 = r.y1, x1 = r.x0, y1 = r.y0;
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      if (!page.ink(x, y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x + 1);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y + 1);
    }
  }
  if (x0 >= x1 || y0 >= y1) return false;
  r = Region{x0, y0, x1, y1};
  return true;
}

struct Gap {
  int begin = 0;  // first background index
  int end = 0;    // one past the last background index
  int width() const { return end - begin; }
};

Gap widest_gap(const std::vector<int>& profile, int offset) {
  Gap best;
  int run_start = -1;
  for (int i = 0; i <= static_cast<int>(profile.size()); ++i) {
    const bool background = i < static_cast<int>(profile.size()) && profile[i] == 0;
    if (background) {
      if (run_start < 0) run_start = i;
      continue;
    }
    if (run_start >= 0 && i - run_start > best.width()) best = Gap{run_start + offset, i + offset};
    run_start = -1;
  }
  return best;
}

}  // namespace

std::vector<BBox> xycut(const PixelPage& page, const XYCutConfig& cfg) {
  std::vector<BBox> leaves;
  Region root{0, 0, page.width(), page.height()};
  if (!tighten(page, root)) return leaves;

  const int min_gap = std::max(1, cfg.gap_threshold);
  // explicit stack; the second half is pushed first so the first half pops first
  std::vector<Region> stack{root};
  while (!stack.empty()) {
    Region r = stack.back();
    stack.pop_back();
    auto emit = [&] { leaves.push_back(BBox{double(r.x0), double(r.y0), double(r.x1), double(r.y1)}); };
    if (static_cast<double>(r.area()) < cfg.min_area) {
      emit();
      continue;
    }
    std::vector<int> rows(r.y1 - r.y0, 0);
    std::vector<int> cols(r.x1 - r.x0, 0);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        if (page.ink(x, y)) {
          ++rows[y - r.y0];
          ++cols[x - r.x0];
        }
      }
    }
    const Gap row_gap = widest_gap(rows, r.y0);
    const Gap col_gap = widest_gap(cols, r.x0);
    Region first = r;
    Region second = r;
    if (row_gap.width() >= min_gap && row_gap.width() >= col_gap.width()) {
      first.y1 = row_gap.begin;
      second.y0 = row_gap.end;
    } else if (col_gap.width() >= min_gap) {
      first.x1 = col_gap.begin;
      second.x0 = col_gap.end;
    } else {
      emit();
      continue;
    }
    const bool has_first = tighten(page, first);
    const bool has_second = tighten(page, second);
    if (has_second) stack.push_back(second);
    if (has_first) stack.push_back(first);
  }
  return leaves;
}

}  // namespace tabscore
