#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maskprof/image.hpp"
#include "maskprof/object_factors.hpp"

namespace maskprof {

// Per-scene factor values. Pairwise statistics are missing (nullopt) for
// scenes with fewer than two objects.
struct SceneFactorRow {
  std::string scene_id;
  int k = 0;
  std::optional<double> color_similarity;           // [0,1]
  std::optional<double> shape_variation;            // [0,1]
  std::optional<double> color_similarity_chamfer;
  std::optional<double> color_similarity_hausdorff;
  std::optional<double> boundary_shape_similarity;  // [0,1]
  double boundary_shape_entropy = 0.0;              // >= 0
  std::optional<double> centroid_proximity;         // pixels
  std::optional<double> chamfer_proximity;          // pixels
};

// 1 - mean pairwise Euclidean distance of per-object mean colors / (255 sqrt3).
std::optional<double> inter_object_color_similarity(const std::vector<ObjectInstance>& objects);

// Mean pairwise |bbox diagonal difference| / (255 sqrt2).
std::optional<double> inter_object_shape_variation(const std::vector<ObjectInstance>& objects);

// Objects as RGB point sets; 1 - mean pairwise symmetric Chamfer / (255 sqrt3).
std::optional<double> color_similarity_chamfer(const std::vector<ObjectInstance>& objects,
                                               const RgbImage& image);

// Same with the directed Hausdorff distance, averaged over both directions.
std::optional<double> color_similarity_hausdorff(const std::vector<ObjectInstance>& objects,
                                                 const RgbImage& image);

// Mean pairwise IoU of bbox-cropped boundaries normalized into a 64x64 box
// (aspect preserved, centered) and dilated by one pixel.
std::optional<double> boundary_shape_similarity(const std::vector<ObjectInstance>& objects);

// Mean of the strictly positive 3x3 entropies of the object index map
// (background 0); 0 when no window mixes labels.
double boundary_shape_entropy(const std::vector<ObjectInstance>& objects, int width, int height);

// Mean pairwise centroid distance, pixels.
std::optional<double> centroid_proximity(const std::vector<ObjectInstance>& objects);

// Objects as 2-D pixel sets; mean pairwise symmetric Chamfer distance, pixels.
std::optional<double> chamfer_proximity(const std::vector<ObjectInstance>& objects);

SceneFactorRow compute_scene_factors(const std::string& scene_id,
                                     const std::vector<ObjectInstance>& objects,
                                     const RgbImage& image, FactorSet set);

}  // namespace maskprof
