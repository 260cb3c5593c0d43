#include "maskprof/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>

#include "maskprof/errors.hpp"

namespace maskprof {

GrayImage to_grayscale(const RgbImage& image) {
  GrayImage g = GrayImage::zeros(image.width, image.height);
  const std::size_t n = image.pixels.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Rgb& p = image.pixels[i];
    g.values[i] = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
  }
  return g;
}

IntField round_to_int(const GrayImage& gray) {
  IntField f = IntField::zeros(gray.width, gray.height);
  for (std::size_t i = 0; i < gray.values.size(); ++i)
    f.values[i] = static_cast<int>(std::lround(gray.values[i]));
  return f;
}

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

inline double sobel_at(const GrayImage& g, int x, int y) {
  // edge replication
  double v[3][3];
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      v[dy + 1][dx + 1] = g.get(clampi(x + dx, 0, g.width - 1), clampi(y + dy, 0, g.height - 1));
  const double gx = (v[0][2] + 2.0 * v[1][2] + v[2][2]) - (v[0][0] + 2.0 * v[1][0] + v[2][0]);
  const double gy = (v[2][0] + 2.0 * v[2][1] + v[2][2]) - (v[0][0] + 2.0 * v[0][1] + v[0][2]);
  return std::sqrt(gx * gx + gy * gy);
}

inline double entropy_at(const IntField& f, const BinaryMask* support, int x, int y) {
  int vals[9];
  int n = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const int yy = y + dy;
    if (yy < 0 || yy >= f.height) continue;
    for (int dx = -1; dx <= 1; ++dx) {
      const int xx = x + dx;
      if (xx < 0 || xx >= f.width) continue;
      if (support && !support->get(xx, yy)) continue;
      vals[n++] = f.get(xx, yy);
    }
  }
  if (n == 0) return 0.0;
  std::sort(vals, vals + n);
  // run lengths -> counts, summed in sorted-count order so the result does not
  // depend on the symbol labels
  int counts[9];
  int m = 0;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && vals[j] == vals[i]) ++j;
    counts[m++] = j - i;
    i = j;
  }
  std::sort(counts, counts + m);
  double h = 0.0;
  const double inv = 1.0 / n;
  for (int i = 0; i < m; ++i) {
    const double p = counts[i] * inv;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

GrayImage sobel_magnitude(const GrayImage& gray) {
  if (gray.width < 3 || gray.height < 3)
    throw StructuralError("sobel_magnitude: image smaller than 3x3");
  GrayImage out = GrayImage::zeros(gray.width, gray.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) out.set(x, y, sobel_at(gray, x, y));
  return out;
}

GrayImage serial::sobel_magnitude(const GrayImage& gray) {
  if (gray.width < 3 || gray.height < 3)
    throw StructuralError("sobel_magnitude: image smaller than 3x3");
  GrayImage out = GrayImage::zeros(gray.width, gray.height);
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) out.set(x, y, sobel_at(gray, x, y));
  return out;
}

GrayImage local_entropy(const IntField& values, const BinaryMask* support) {
  GrayImage out = GrayImage::zeros(values.width, values.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < values.height; ++y)
    for (int x = 0; x < values.width; ++x) out.set(x, y, entropy_at(values, support, x, y));
  return out;
}

GrayImage serial::local_entropy(const IntField& values, const BinaryMask* support) {
  GrayImage out = GrayImage::zeros(values.width, values.height);
  for (int y = 0; y < values.height; ++y)
    for (int x = 0; x < values.width; ++x) out.set(x, y, entropy_at(values, support, x, y));
  return out;
}

namespace {

struct Pt {
  long long x, y;
  bool operator<(const Pt& o) const { return x < o.x || (x == o.x && y < o.y); }
  bool operator==(const Pt& o) const = default;
};

inline long long cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone chain; returns counter-clockwise hull (collinear points dropped).
std::vector<Pt> hull_of(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Pt> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Rasterizes one hull pass: pixels whose center lies inside or on the polygon.
// Works in doubled coordinates so centers stay integral.
BinaryMask raster_pass(const std::vector<Pt>& hull2, int width, int height, const Box& bbox) {
  BinaryMask out = BinaryMask::zeros(width, height);
  const std::size_t hn = hull2.size();
  for (int y = bbox.y_min; y <= bbox.y_max; ++y) {
    for (int x = bbox.x_min; x <= bbox.x_max; ++x) {
      const Pt c{2LL * x + 1, 2LL * y + 1};
      bool inside = true;
      for (std::size_t i = 0; i < hn && inside; ++i) {
        const Pt& a = hull2[i];
        const Pt& b = hull2[(i + 1) % hn];
        if (cross(a, b, c) < 0) inside = false;
      }
      if (inside) out.set(x, y, 1);
    }
  }
  return out;
}

std::vector<Pt> corner_points(const BinaryMask& mask) {
  std::vector<Pt> pts;
  pts.reserve(static_cast<std::size_t>(mask.count()) * 4);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.get(x, y)) {
        pts.push_back({2LL * x, 2LL * y});
        pts.push_back({2LL * (x + 1), 2LL * y});
        pts.push_back({2LL * x, 2LL * (y + 1)});
        pts.push_back({2LL * (x + 1), 2LL * (y + 1)});
      }
  return pts;
}

Box tight_bbox(const BinaryMask& mask) {
  Box b{mask.width, mask.height, -1, -1};
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.get(x, y)) {
        b.x_min = std::min(b.x_min, x);
        b.y_min = std::min(b.y_min, y);
        b.x_max = std::max(b.x_max, x);
        b.y_max = std::max(b.y_max, y);
      }
  return b;
}

}  // namespace

ConvexMask convex_hull(const BinaryMask& mask) {
  if (mask.count() == 0) throw StructuralError("convex_hull: empty mask");
  BinaryMask cur = mask;
  std::vector<Pt> hull2;
  // Rasterization can push pixel centers onto the hull edge of corners the
  // original mask did not own; iterate until the raster is a fixed point so
  // hull(raster).raster == raster holds for every output.
  for (;;) {
    hull2 = hull_of(corner_points(cur));
    BinaryMask next = raster_pass(hull2, mask.width, mask.height, tight_bbox(cur));
    if (next == cur) break;
    cur = std::move(next);
  }
  ConvexMask result;
  result.raster = std::move(cur);
  result.hull_vertices.reserve(hull2.size());
  for (const Pt& p : hull2)
    result.hull_vertices.emplace_back(static_cast<int>(p.x / 2), static_cast<int>(p.y / 2));
  return result;
}

std::vector<BinaryMask> connected_components(const BinaryMask& mask) {
  std::vector<BinaryMask> comps;
  std::vector<std::uint8_t> seen(mask.bits.size(), 0);
  std::vector<std::pair<long, std::size_t>> order;  // (-size, first pixel index)
  for (int y0 = 0; y0 < mask.height; ++y0) {
    for (int x0 = 0; x0 < mask.width; ++x0) {
      const std::size_t start = static_cast<std::size_t>(y0) * mask.width + x0;
      if (!mask.bits[start] || seen[start]) continue;
      BinaryMask comp = BinaryMask::zeros(mask.width, mask.height);
      long size = 0;
      std::deque<std::pair<int, int>> queue{{x0, y0}};
      seen[start] = 1;
      while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        comp.set(x, y, 1);
        ++size;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int xx = x + dx, yy = y + dy;
            if (!mask.in_bounds(xx, yy)) continue;
            const std::size_t idx = static_cast<std::size_t>(yy) * mask.width + xx;
            if (mask.bits[idx] && !seen[idx]) {
              seen[idx] = 1;
              queue.emplace_back(xx, yy);
            }
          }
      }
      order.emplace_back(-size, comps.size());
      comps.push_back(std::move(comp));
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<BinaryMask> sorted;
  sorted.reserve(comps.size());
  for (const auto& [neg, idx] : order) sorted.push_back(std::move(comps[idx]));
  return sorted;
}

BinaryMask inner_boundary(const BinaryMask& mask) {
  BinaryMask out = BinaryMask::zeros(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == mask.width - 1 || y == mask.height - 1;
      if (edge || !mask.get(x - 1, y) || !mask.get(x + 1, y) || !mask.get(x, y - 1) ||
          !mask.get(x, y + 1))
        out.set(x, y, 1);
    }
  return out;
}

BinaryMask erode8(const BinaryMask& mask) {
  BinaryMask out = BinaryMask::zeros(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      bool interior = true;
      for (int dy = -1; dy <= 1 && interior; ++dy)
        for (int dx = -1; dx <= 1 && interior; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (mask.in_bounds(xx, yy) && !mask.get(xx, yy)) interior = false;
        }
      if (interior) out.set(x, y, 1);
    }
  return out;
}

BinaryMask dilate8(const BinaryMask& mask) {
  BinaryMask out = BinaryMask::zeros(mask.width, mask.height);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (mask.in_bounds(xx, yy)) out.set(xx, yy, 1);
        }
    }
  return out;
}

namespace {

// Column pass: per pixel the vertical distance (in rows) to the nearest site
// in its own column, or -1 when the column is empty.
std::vector<int> column_distances(const BinaryMask& sites) {
  const int w = sites.width, h = sites.height;
  std::vector<int> col(static_cast<std::size_t>(w) * h, -1);
#pragma omp parallel for schedule(static)
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (sites.get(x, y)) last = y;
      if (last >= 0) col[static_cast<std::size_t>(y) * w + x] = y - last;
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (sites.get(x, y)) last = y;
      if (last >= 0) {
        auto& c = col[static_cast<std::size_t>(y) * w + x];
        const int d = last - y;
        if (c < 0 || d < c) c = d;
      }
    }
  }
  return col;
}

std::vector<long long> distance_field_rows(const BinaryMask& sites, const std::vector<int>& col,
                                           bool parallel) {
  const int w = sites.width, h = sites.height;
  std::vector<long long> out(static_cast<std::size_t>(w) * h, -1);
#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      long long best = -1;
      for (int c = 0; c < w; ++c) {
        const int cd = col[row + c];
        if (cd < 0) continue;
        const long long dx = x - c;
        const long long d = dx * dx + static_cast<long long>(cd) * cd;
        if (best < 0 || d < best) best = d;
      }
      out[row + x] = best;
    }
  }
  return out;
}

}  // namespace

std::vector<long long> distance_sq_field(const BinaryMask& sites) {
  return distance_field_rows(sites, column_distances(sites), true);
}

std::vector<long long> serial::distance_sq_field(const BinaryMask& sites) {
  const int w = sites.width, h = sites.height;
  std::vector<int> col(static_cast<std::size_t>(w) * h, -1);
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (sites.get(x, y)) last = y;
      if (last >= 0) col[static_cast<std::size_t>(y) * w + x] = y - last;
    }
    last = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (sites.get(x, y)) last = y;
      if (last >= 0) {
        auto& c = col[static_cast<std::size_t>(y) * w + x];
        const int d = last - y;
        if (c < 0 || d < c) c = d;
      }
    }
  }
  return distance_field_rows(sites, col, false);
}

BinaryMask resize_nn(const BinaryMask& src, int tw, int th) {
  BinaryMask out = BinaryMask::zeros(tw, th);
  for (int y = 0; y < th; ++y) {
    const int sy = std::min(static_cast<int>((y + 0.5) * src.height / th), src.height - 1);
    for (int x = 0; x < tw; ++x) {
      const int sx = std::min(static_cast<int>((x + 0.5) * src.width / tw), src.width - 1);
      out.set(x, y, src.get(sx, sy));
    }
  }
  return out;
}

}  // namespace maskprof
