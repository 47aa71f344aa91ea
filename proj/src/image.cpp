#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "tabscore/errors.hpp"
#include "tabscore/geometry.hpp"

namespace tabscore {

namespace {

std::uint8_t luminance(int r, int g, int b) {
  return static_cast<std::uint8_t>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

// Netpbm header integers, skipping comments.
int read_pnm_int(std::istream& in, const std::string& where) {
  int value = 0;
  while (true) {
    in >> std::ws;
    if (in.peek() == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (!(in >> value)) throw InputError(where + ": malformed netpbm header");
    return value;
  }
}

GrayImage load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  const std::string where = path.string();
  const bool binary = magic == "P5" || magic == "P6";
  const bool color = magic == "P3" || magic == "P6";
  if (!(magic == "P2" || magic == "P3" || binary)) throw InputError(where + ": unsupported netpbm type");
  GrayImage img;
  img.width = read_pnm_int(in, where);
  img.height = read_pnm_int(in, where);
  const int maxval = read_pnm_int(in, where);
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255) {
    throw InputError(where + ": unsupported netpbm dimensions or depth");
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  const int channels = color ? 3 : 1;
  std::vector<int> samples(n * channels);
  if (binary) {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(samples.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw InputError(where + ": truncated pixel data");
    for (std::size_t i = 0; i < raw.size(); ++i) samples[i] = raw[i];
  } else {
    for (auto& s : samples) {
      if (!(in >> s)) throw InputError(where + ": truncated pixel data");
    }
  }
  img.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto scale = [&](int v) { return static_cast<int>(std::lround(v * 255.0 / maxval)); };
    img.pixels[i] = color ? luminance(scale(samples[3 * i]), scale(samples[3 * i + 1]), scale(samples[3 * i + 2]))
                          : static_cast<std::uint8_t>(scale(samples[i]));
  }
  return img;
}

GrayImage load_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw InputError(path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw InputError(path.string() + ": " + msg);
  }
  return out;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot open " + path.string());
  unsigned char head[8] = {};
  probe.read(reinterpret_cast<char*>(head), 8);
  if (probe.gcount() >= 8 && png_sig_cmp(head, 0, 8) == 0) return load_png(path);
  if (probe.gcount() >= 2 && head[0] == 'P') return load_pnm(path);
  throw InputError(path.string() + ": unsupported image format (expected PNG or netpbm)");
}

}  // namespace tabscore
