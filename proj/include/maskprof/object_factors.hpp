#pragma once

#include <optional>
#include <string>
#include <utility>

#include "maskprof/image.hpp"
#include "maskprof/raster.hpp"

namespace maskprof {

enum class FactorSet { primary, candidates, all };

// Per-object factor values. Bounded factors stay within their declared ranges;
// color_gradient is missing (nullopt) for objects without interior pixels.
struct ObjectFactorRow {
  std::string scene_id;
  int object_index = 0;
  std::optional<double> color_gradient;  // [0,1]
  double shape_concavity = 0.0;          // [0,1]
  long color_count = 0;                  // >= 1
  double color_entropy = 0.0;            // >= 0
  double non_rectangularity = 0.0;       // [0,1]
  double incompactness_pp = 0.0;         // [0,1]
  double incompactness_schwartzberg = 0.0;  // [0,1]
  double discontinuity = 0.0;            // [0,1)
  double decentralization = 0.0;         // >= 0
};

// Mean Sobel magnitude over the mask's interior (pixels whose full 3x3 window
// stays inside the mask), divided by 255 and clamped to [0,1]. Returns nullopt
// when the mask has no interior pixel. `sobel` is the precomputed magnitude
// field of the scene's grayscale image.
std::optional<double> object_color_gradient(const ObjectInstance& instance,
                                            const GrayImage& sobel);
std::optional<double> object_color_gradient(const ObjectInstance& instance,
                                            const RgbImage& image);

// 1 - |mask| / |convex hull raster|.
double object_shape_concavity(const ObjectInstance& instance);

// Number of distinct (r,g,b) triples over mask pixels.
long object_color_count(const ObjectInstance& instance, const RgbImage& image);

// Mean local entropy of the rounded grayscale image over mask pixels, with the
// 3x3 windows clipped to the mask.
double object_color_entropy(const ObjectInstance& instance, const RgbImage& image);

// 1 - |mask| / bbox area (inclusive extents).
double object_non_rectangularity(const ObjectInstance& instance);

// (1 - Polsby-Popper, 1 - Schwartzberg), both clamped to [0,1]. The perimeter
// is the count of exposed 4-neighbor pixel edges.
std::pair<double, double> object_incompactness(const ObjectInstance& instance);

// 1 - largest connected component size / total size.
double object_discontinuity(const ObjectInstance& instance);

// Mean over mask pixels of (x - cx)^2 (y - cy)^2.
double object_decentralization(const ObjectInstance& instance);

// Contexts shared by every object of one scene.
struct SceneRasterContext {
  GrayImage gray;
  GrayImage sobel;
  IntField gray_int;
};
SceneRasterContext make_raster_context(const RgbImage& image);

ObjectFactorRow compute_object_factors(const std::string& scene_id, int object_index,
                                       const ObjectInstance& instance, const RgbImage& image,
                                       const SceneRasterContext& ctx, FactorSet set);

}  // namespace maskprof
