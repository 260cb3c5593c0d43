#pragma once

#include <utility>
#include <vector>

#include "maskprof/image.hpp"

namespace maskprof {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  static GrayImage zeros(int w, int h) {
    GrayImage g;
    g.width = w;
    g.height = h;
    g.values.assign(static_cast<std::size_t>(w) * h, 0.0);
    return g;
  }
  double get(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, double v) { values[static_cast<std::size_t>(y) * width + x] = v; }
};

struct IntField {
  int width = 0;
  int height = 0;
  std::vector<int> values;

  static IntField zeros(int w, int h) {
    IntField f;
    f.width = w;
    f.height = h;
    f.values.assign(static_cast<std::size_t>(w) * h, 0);
    return f;
  }
  int get(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, int v) { values[static_cast<std::size_t>(y) * width + x] = v; }
};

// Smallest convex polygon covering a mask, with its pixelization.
// Vertices are pixel-corner coordinates in counter-clockwise order (treating
// x/y as Cartesian); the raster holds every pixel whose center lies inside or
// on the polygon, iterated to a fixed point so that rasterizing the hull of
// the raster reproduces the raster itself.
struct ConvexMask {
  std::vector<std::pair<int, int>> hull_vertices;
  BinaryMask raster;
};

// Y = 0.299 R + 0.587 G + 0.114 B, kept as real (no rounding).
GrayImage to_grayscale(const RgbImage& image);

IntField round_to_int(const GrayImage& gray);

// Per-pixel sqrt(Gx^2 + Gy^2) with the standard 3x3 Sobel kernels and
// edge-replication padding. Throws StructuralError below 3x3.
GrayImage sobel_magnitude(const GrayImage& gray);

ConvexMask convex_hull(const BinaryMask& mask);

// 8-connected components, sorted by pixel count descending (ties by first
// pixel in row-major order).
std::vector<BinaryMask> connected_components(const BinaryMask& mask);

// Foreground pixels with at least one 4-neighbor (or the image edge) outside
// the mask.
BinaryMask inner_boundary(const BinaryMask& mask);

// Per-pixel Shannon entropy (log2) of the value histogram over the 3x3
// neighborhood clipped to image bounds and, if given, to the support mask.
GrayImage local_entropy(const IntField& values, const BinaryMask* support = nullptr);

// Pixels whose full 3x3 neighborhood (clipped to the image) stays inside the
// mask; equivalently the mask eroded by one pixel in 8-connectivity.
BinaryMask erode8(const BinaryMask& mask);

// One dilation step with the 3x3 (8-neighborhood) structuring element.
BinaryMask dilate8(const BinaryMask& mask);

// Exact squared Euclidean distance from every pixel to the nearest foreground
// pixel of `sites` (integer arithmetic throughout). Distances of -1 mark an
// empty site set.
std::vector<long long> distance_sq_field(const BinaryMask& sites);

// Nearest-neighbor resample of a mask patch to tw x th (floor center mapping).
BinaryMask resize_nn(const BinaryMask& src, int tw, int th);

// Serial reference kernels. The public versions above use OpenMP; these stay
// single-threaded and bit-identical for tests and the benchmark.
namespace serial {
GrayImage sobel_magnitude(const GrayImage& gray);
GrayImage local_entropy(const IntField& values, const BinaryMask* support = nullptr);
std::vector<long long> distance_sq_field(const BinaryMask& sites);
}  // namespace serial

}  // namespace maskprof
