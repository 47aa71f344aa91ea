#pragma once

// Box arithmetic and the page-level heuristics used by extraction
// pipelines: NMS, empty-detection filtering, rotation detection and
// recursive XY-cut segmentation.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tabscore {

/// Axis-aligned rectangle in page pixel coordinates, x0 <= x1 and y0 <= y1.
struct BBox {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x0 + x1); }
  double center_y() const { return 0.5 * (y0 + y1); }
  bool valid() const { return x0 <= x1 && y0 <= y1; }
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// A word on the page.
struct Token {
  BBox bbox;
  std::string text;
};

struct ScoredBox {
  BBox bbox;
  double confidence = 1.0;
};

double intersection_area(const BBox& a, const BBox& b);

/// Intersection over union; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b);

/// Greedy non-maximum suppression. Returns indices of kept boxes ordered by
/// descending confidence (ties by input order). A box is suppressed when its
/// IoU with an already kept box exceeds `iou_threshold`.
std::vector<std::size_t> nms(std::span<const ScoredBox> boxes, double iou_threshold);

/// Indices of the k most confident boxes, descending.
std::vector<std::size_t> top_k(std::span<const ScoredBox> boxes, std::size_t k);

/// Indices (in order) of boxes containing the center point of at least one
/// token.
std::vector<std::size_t> filter_empty(std::span<const BBox> boxes, std::span<const Token> tokens);

enum class Orientation { upright, rotated };

/// Upright when mean token width / mean token height >= 1. Throws
/// InsufficientEvidenceError for an empty token list or degenerate tokens.
Orientation detect_rotation(std::span<const Token> tokens_in_box);

/// Grows a box by `pad` pixels on every side, clipped to the page.
BBox pad_box(const BBox& box, double pad, double page_width, double page_height);

/// 8-bit grayscale raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0 = black
};

/// Reads PGM/PPM (binary or ASCII) and PNG files; color is converted to
/// luminance. Throws InputError.
GrayImage load_image(const std::filesystem::path& path);

/// Binary ink mask; true marks an ink pixel.
class PixelPage {
 public:
  PixelPage(int width, int height, std::vector<std::uint8_t> ink);

  int width() const { return width_; }
  int height() const { return height_; }
  bool ink(int x, int y) const { return ink_[static_cast<std::size_t>(y) * width_ + x] != 0; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> ink_;
};

/// Pixels whose luminance (in [0,1]) is below the threshold become ink.
PixelPage binarize(const GrayImage& image, double luminance_threshold);

struct XYCutConfig {
  double min_area = 1000.0;           // px^2; regions smaller than this are not split further
  int gap_threshold = 10;             // px; narrowest whitespace band that can be cut
  double binarization_threshold = 0.5;
  double pad_detect = 10.0;           // padding around detected tables
  double pad_structure = 100.0;       // padding around table crops for structure recognition
};

/// Recursive XY-cut. Each step cuts the region at its widest all-background
/// band (rows or columns, rows preferred on ties) of at least gap_threshold
/// pixels; recursion stops when no band qualifies or the region is smaller
/// than min_area. Returns the tight ink boxes of the leaves in reading order.
/// Box coordinates are pixel edges: x1/y1 are one past the last ink pixel.
std::vector<BBox> xycut(const PixelPage& page, const XYCutConfig& cfg);

}  // namespace tabscore
