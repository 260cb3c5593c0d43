#include "maskprof/scene_factors.hpp"

#include <algorithm>
#include <cmath>

#include "maskprof/raster.hpp"

namespace maskprof {

namespace {

constexpr double kColorNorm = 255.0 * 1.7320508075688772;  // 255 sqrt(3)
constexpr double kDiagNorm = 255.0 * 1.4142135623730951;   // 255 sqrt(2)
constexpr int kUnitBox = 64;

// Pairwise values are accumulated in sorted order so scene factors are exactly
// invariant to the object ordering.
double mean_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

struct WeightedColor {
  int r, g, b;
  long n;
};

std::vector<WeightedColor> color_points(const ObjectInstance& obj, const RgbImage& image) {
  std::vector<std::uint32_t> keys;
  keys.reserve(static_cast<std::size_t>(obj.area));
  for (int y = obj.bbox.y_min; y <= obj.bbox.y_max; ++y)
    for (int x = obj.bbox.x_min; x <= obj.bbox.x_max; ++x)
      if (obj.mask.get(x, y)) {
        const Rgb& p = image.at(x, y);
        keys.push_back((std::uint32_t(p.r) << 16) | (std::uint32_t(p.g) << 8) | p.b);
      }
  std::sort(keys.begin(), keys.end());
  std::vector<WeightedColor> pts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    pts.push_back({int(keys[i] >> 16), int((keys[i] >> 8) & 0xff), int(keys[i] & 0xff),
                   static_cast<long>(j - i)});
    i = j;
  }
  return pts;
}

long long min_sq_to(const WeightedColor& a, const std::vector<WeightedColor>& bs) {
  long long best = -1;
  for (const auto& b : bs) {
    const long long dr = a.r - b.r, dg = a.g - b.g, db = a.b - b.b;
    const long long d = dr * dr + dg * dg + db * db;
    if (best < 0 || d < best) best = d;
  }
  return best;
}

double directed_chamfer(const std::vector<WeightedColor>& from,
                        const std::vector<WeightedColor>& to) {
  double sum = 0.0;
  long n = 0;
  for (const auto& a : from) {
    sum += a.n * std::sqrt(static_cast<double>(min_sq_to(a, to)));
    n += a.n;
  }
  return sum / static_cast<double>(n);
}

double directed_hausdorff(const std::vector<WeightedColor>& from,
                          const std::vector<WeightedColor>& to) {
  long long worst = 0;
  for (const auto& a : from) worst = std::max(worst, min_sq_to(a, to));
  return std::sqrt(static_cast<double>(worst));
}

// Boundary cropped to bbox, scaled into the unit box with aspect preserved,
// centered, then dilated once.
BinaryMask normalized_boundary(const ObjectInstance& obj) {
  const Box& b = obj.bbox;
  BinaryMask crop = BinaryMask::zeros(b.span_x(), b.span_y());
  for (int y = 0; y < crop.height; ++y)
    for (int x = 0; x < crop.width; ++x)
      crop.set(x, y, obj.boundary.get(b.x_min + x, b.y_min + y));
  const double scale = static_cast<double>(kUnitBox) / std::max(crop.width, crop.height);
  const int tw = std::max(1, static_cast<int>(std::llround(crop.width * scale)));
  const int th = std::max(1, static_cast<int>(std::llround(crop.height * scale)));
  const BinaryMask scaled = resize_nn(crop, tw, th);
  BinaryMask box = BinaryMask::zeros(kUnitBox, kUnitBox);
  const int ox = (kUnitBox - tw) / 2, oy = (kUnitBox - th) / 2;
  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x)
      if (scaled.get(x, y)) box.set(ox + x, oy + y, 1);
  return dilate8(box);
}

}  // namespace

std::optional<double> inter_object_color_similarity(const std::vector<ObjectInstance>& objects) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<double> dists;
  for (std::size_t i = 0; i < objects.size(); ++i)
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      const auto& a = objects[i].mean_color;
      const auto& b = objects[j].mean_color;
      const double dr = a[0] - b[0], dg = a[1] - b[1], db = a[2] - b[2];
      dists.push_back(std::sqrt(dr * dr + dg * dg + db * db));
    }
  return 1.0 - mean_sorted(std::move(dists)) / kColorNorm;
}

std::optional<double> inter_object_shape_variation(const std::vector<ObjectInstance>& objects) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<double> diffs;
  for (std::size_t i = 0; i < objects.size(); ++i)
    for (std::size_t j = i + 1; j < objects.size(); ++j)
      diffs.push_back(std::abs(objects[i].bbox_diagonal - objects[j].bbox_diagonal));
  return mean_sorted(std::move(diffs)) / kDiagNorm;
}

std::optional<double> color_similarity_chamfer(const std::vector<ObjectInstance>& objects,
                                               const RgbImage& image) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<std::vector<WeightedColor>> pts;
  pts.reserve(objects.size());
  for (const auto& o : objects) pts.push_back(color_points(o, image));
  std::vector<double> dists;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      dists.push_back(0.5 * (directed_chamfer(pts[i], pts[j]) + directed_chamfer(pts[j], pts[i])));
  return 1.0 - mean_sorted(std::move(dists)) / kColorNorm;
}

std::optional<double> color_similarity_hausdorff(const std::vector<ObjectInstance>& objects,
                                                 const RgbImage& image) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<std::vector<WeightedColor>> pts;
  pts.reserve(objects.size());
  for (const auto& o : objects) pts.push_back(color_points(o, image));
  std::vector<double> dists;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      dists.push_back(0.5 *
                      (directed_hausdorff(pts[i], pts[j]) + directed_hausdorff(pts[j], pts[i])));
  return 1.0 - mean_sorted(std::move(dists)) / kColorNorm;
}

std::optional<double> boundary_shape_similarity(const std::vector<ObjectInstance>& objects) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<BinaryMask> norm;
  norm.reserve(objects.size());
  for (const auto& o : objects) norm.push_back(normalized_boundary(o));
  std::vector<double> ious;
  for (std::size_t i = 0; i < norm.size(); ++i)
    for (std::size_t j = i + 1; j < norm.size(); ++j) {
      long inter = 0, uni = 0;
      for (std::size_t p = 0; p < norm[i].bits.size(); ++p) {
        inter += norm[i].bits[p] & norm[j].bits[p];
        uni += norm[i].bits[p] | norm[j].bits[p];
      }
      ious.push_back(uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni));
    }
  return mean_sorted(std::move(ious));
}

double boundary_shape_entropy(const std::vector<ObjectInstance>& objects, int width, int height) {
  if (objects.empty()) return 0.0;
  IntField index_map = IntField::zeros(width, height);
  for (std::size_t k = 0; k < objects.size(); ++k)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        if (objects[k].mask.get(x, y)) index_map.set(x, y, static_cast<int>(k) + 1);
  const GrayImage ent = local_entropy(index_map);
  double sum = 0.0;
  long n = 0;
  for (double v : ent.values)
    if (v > 0.0) {
      sum += v;
      ++n;
    }
  return n == 0 ? 0.0 : sum / n;
}

std::optional<double> centroid_proximity(const std::vector<ObjectInstance>& objects) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<double> dists;
  for (std::size_t i = 0; i < objects.size(); ++i)
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      // centroid difference via integer sums: (sx_i n_j - sx_j n_i)/(n_i n_j);
      // the numerators cancel a joint translation exactly
      const long long ni = objects[i].area, nj = objects[j].area;
      const double inv = 1.0 / (static_cast<double>(ni) * static_cast<double>(nj));
      const double dx = static_cast<double>(objects[i].sum_x * nj - objects[j].sum_x * ni) * inv;
      const double dy = static_cast<double>(objects[i].sum_y * nj - objects[j].sum_y * ni) * inv;
      dists.push_back(std::sqrt(dx * dx + dy * dy));
    }
  return mean_sorted(std::move(dists));
}

std::optional<double> chamfer_proximity(const std::vector<ObjectInstance>& objects) {
  if (objects.size() < 2) return std::nullopt;
  std::vector<std::vector<long long>> fields;
  fields.reserve(objects.size());
  for (const auto& o : objects) fields.push_back(distance_sq_field(o.mask));
  auto directed = [&](std::size_t from, std::size_t to) {
    double sum = 0.0;
    const auto& f = fields[to];
    const BinaryMask& m = objects[from].mask;
    for (std::size_t i = 0; i < m.bits.size(); ++i)
      if (m.bits[i]) sum += std::sqrt(static_cast<double>(f[i]));
    return sum / static_cast<double>(objects[from].area);
  };
  std::vector<double> dists;
  for (std::size_t i = 0; i < objects.size(); ++i)
    for (std::size_t j = i + 1; j < objects.size(); ++j)
      dists.push_back(0.5 * (directed(i, j) + directed(j, i)));
  return mean_sorted(std::move(dists));
}

SceneFactorRow compute_scene_factors(const std::string& scene_id,
                                     const std::vector<ObjectInstance>& objects,
                                     const RgbImage& image, FactorSet set) {
  SceneFactorRow row;
  row.scene_id = scene_id;
  row.k = static_cast<int>(objects.size());
  if (set != FactorSet::candidates) {
    row.color_similarity = inter_object_color_similarity(objects);
    row.shape_variation = inter_object_shape_variation(objects);
  }
  if (set != FactorSet::primary) {
    row.color_similarity_chamfer = color_similarity_chamfer(objects, image);
    row.color_similarity_hausdorff = color_similarity_hausdorff(objects, image);
    row.boundary_shape_similarity = boundary_shape_similarity(objects);
    row.boundary_shape_entropy = boundary_shape_entropy(objects, image.width, image.height);
    row.centroid_proximity = centroid_proximity(objects);
    row.chamfer_proximity = chamfer_proximity(objects);
  }
  return row;
}

}  // namespace maskprof
