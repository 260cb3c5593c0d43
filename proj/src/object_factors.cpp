#include "maskprof/object_factors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace maskprof {

namespace {
inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }
}

std::optional<double> object_color_gradient(const ObjectInstance& instance,
                                            const GrayImage& sobel) {
  // Boundary pixels are excluded so the background cannot leak in; the Sobel
  // window is 3x3, so the kept pixels are exactly the 8-connected erosion.
  const BinaryMask interior = erode8(instance.mask);
  double sum = 0.0;
  long n = 0;
  for (int y = 0; y < interior.height; ++y)
    for (int x = 0; x < interior.width; ++x)
      if (interior.get(x, y)) {
        sum += sobel.get(x, y);
        ++n;
      }
  if (n == 0) return std::nullopt;
  return clamp01(sum / n / 255.0);
}

std::optional<double> object_color_gradient(const ObjectInstance& instance,
                                            const RgbImage& image) {
  return object_color_gradient(instance, sobel_magnitude(to_grayscale(image)));
}

double object_shape_concavity(const ObjectInstance& instance) {
  const ConvexMask hull = convex_hull(instance.mask);
  return 1.0 - static_cast<double>(instance.area) / static_cast<double>(hull.raster.count());
}

long object_color_count(const ObjectInstance& instance, const RgbImage& image) {
  std::unordered_set<std::uint32_t> colors;
  for (int y = instance.bbox.y_min; y <= instance.bbox.y_max; ++y)
    for (int x = instance.bbox.x_min; x <= instance.bbox.x_max; ++x)
      if (instance.mask.get(x, y)) {
        const Rgb& p = image.at(x, y);
        colors.insert((std::uint32_t(p.r) << 16) | (std::uint32_t(p.g) << 8) | p.b);
      }
  return static_cast<long>(colors.size());
}

double object_color_entropy(const ObjectInstance& instance, const RgbImage& image) {
  const IntField gray = round_to_int(to_grayscale(image));
  const GrayImage ent = local_entropy(gray, &instance.mask);
  double sum = 0.0;
  long n = 0;
  for (int y = instance.bbox.y_min; y <= instance.bbox.y_max; ++y)
    for (int x = instance.bbox.x_min; x <= instance.bbox.x_max; ++x)
      if (instance.mask.get(x, y)) {
        sum += ent.get(x, y);
        ++n;
      }
  return n == 0 ? 0.0 : sum / n;
}

double object_non_rectangularity(const ObjectInstance& instance) {
  return 1.0 - static_cast<double>(instance.area) / static_cast<double>(instance.bbox.area());
}

std::pair<double, double> object_incompactness(const ObjectInstance& instance) {
  const BinaryMask& m = instance.mask;
  long perimeter = 0;
  for (int y = instance.bbox.y_min; y <= instance.bbox.y_max; ++y)
    for (int x = instance.bbox.x_min; x <= instance.bbox.x_max; ++x) {
      if (!m.get(x, y)) continue;
      if (x == 0 || !m.get(x - 1, y)) ++perimeter;
      if (x == m.width - 1 || !m.get(x + 1, y)) ++perimeter;
      if (y == 0 || !m.get(x, y - 1)) ++perimeter;
      if (y == m.height - 1 || !m.get(x, y + 1)) ++perimeter;
    }
  const double a = static_cast<double>(instance.area);
  const double p = static_cast<double>(perimeter);
  const double pp = 4.0 * std::numbers::pi * a / (p * p);
  const double schwartzberg = 2.0 * std::numbers::pi * std::sqrt(a / std::numbers::pi) / p;
  return {clamp01(1.0 - pp), clamp01(1.0 - schwartzberg)};
}

double object_discontinuity(const ObjectInstance& instance) {
  const auto comps = connected_components(instance.mask);
  return 1.0 - static_cast<double>(comps.front().count()) / static_cast<double>(instance.area);
}

double object_decentralization(const ObjectInstance& instance) {
  // (x - cx)^2 (y - cy)^2 summed as ((n x - sx)(n y - sy))^2 / n^4 so the
  // value is exactly translation invariant
  const long long n = instance.area;
  __int128 sum = 0;
  for (int y = instance.bbox.y_min; y <= instance.bbox.y_max; ++y)
    for (int x = instance.bbox.x_min; x <= instance.bbox.x_max; ++x)
      if (instance.mask.get(x, y)) {
        const long long dx = n * x - instance.sum_x;
        const long long dy = n * y - instance.sum_y;
        sum += static_cast<__int128>(dx * dx) * static_cast<__int128>(dy * dy);
      }
  const double nn = static_cast<double>(n);
  return static_cast<double>(sum) / (nn * nn * nn * nn * nn);
}

SceneRasterContext make_raster_context(const RgbImage& image) {
  SceneRasterContext ctx;
  ctx.gray = to_grayscale(image);
  ctx.sobel = sobel_magnitude(ctx.gray);
  ctx.gray_int = round_to_int(ctx.gray);
  return ctx;
}

ObjectFactorRow compute_object_factors(const std::string& scene_id, int object_index,
                                       const ObjectInstance& instance, const RgbImage& image,
                                       const SceneRasterContext& ctx, FactorSet set) {
  ObjectFactorRow row;
  row.scene_id = scene_id;
  row.object_index = object_index;
  if (set != FactorSet::candidates) {
    row.color_gradient = object_color_gradient(instance, ctx.sobel);
    row.shape_concavity = object_shape_concavity(instance);
  }
  if (set != FactorSet::primary) {
    row.color_count = object_color_count(instance, image);
    const GrayImage ent = local_entropy(ctx.gray_int, &instance.mask);
    double sum = 0.0;
    for (int y = instance.bbox.y_min; y <= instance.bbox.y_max; ++y)
      for (int x = instance.bbox.x_min; x <= instance.bbox.x_max; ++x)
        if (instance.mask.get(x, y)) sum += ent.get(x, y);
    row.color_entropy = sum / static_cast<double>(instance.area);
    row.non_rectangularity = object_non_rectangularity(instance);
    std::tie(row.incompactness_pp, row.incompactness_schwartzberg) =
        object_incompactness(instance);
    row.discontinuity = object_discontinuity(instance);
    row.decentralization = object_decentralization(instance);
  }
  return row;
}

}  // namespace maskprof
