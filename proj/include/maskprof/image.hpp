#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace maskprof {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major

  static RgbImage filled(int w, int h, Rgb c = {}) {
    RgbImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<std::size_t>(w) * h, c);
    return img;
  }
  Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  bool operator==(const RgbImage&) const = default;
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major, {0,1}

  static BinaryMask zeros(int w, int h) {
    BinaryMask m;
    m.width = w;
    m.height = h;
    m.bits.assign(static_cast<std::size_t>(w) * h, 0);
    return m;
  }
  std::uint8_t get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, std::uint8_t v = 1) { bits[static_cast<std::size_t>(y) * width + x] = v; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  long count() const {
    long n = 0;
    for (auto b : bits) n += b;
    return n;
  }
  bool operator==(const BinaryMask&) const = default;
};

struct SoftMask {
  int width = 0;
  int height = 0;
  std::vector<float> values;  // row-major, [0,1]

  float get(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// One image plus its ordered ground-truth instance masks.
struct Scene {
  std::string id;
  RgbImage image;
  std::vector<BinaryMask> objects;
};

// Axis-aligned box with inclusive pixel extents.
struct Box {
  int x_min = 0, y_min = 0, x_max = -1, y_max = -1;
  int span_x() const { return x_max - x_min + 1; }
  int span_y() const { return y_max - y_min + 1; }
  long area() const { return static_cast<long>(span_x()) * span_y(); }
  double diagonal() const {
    const double dx = span_x(), dy = span_y();
    return std::sqrt(dx * dx + dy * dy);
  }
};

// A mask with its cached derived geometry. x = column, y = row, origin top-left.
struct ObjectInstance {
  BinaryMask mask;
  std::array<double, 3> mean_color{};  // arithmetic mean over mask pixels
  Box bbox;
  double bbox_diagonal = 0.0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  // integer coordinate sums; centroid-derived factors use these so they stay
  // exactly translation invariant
  long long sum_x = 0;
  long long sum_y = 0;
  BinaryMask boundary;  // 4-neighbor inner boundary, 1 px thick
  long area = 0;
};

// Populates all derived fields; throws StructuralError on an empty mask or a
// mask/image dimension mismatch. Deterministic, independent of iteration order.
ObjectInstance derive_instance(const BinaryMask& mask, const RgbImage& image);

}  // namespace maskprof
