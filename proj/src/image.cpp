#include "maskprof/image.hpp"

#include <cmath>

#include "maskprof/errors.hpp"
#include "maskprof/raster.hpp"

namespace maskprof {

ObjectInstance derive_instance(const BinaryMask& mask, const RgbImage& image) {
  if (mask.width != image.width || mask.height != image.height)
    throw StructuralError("derive_instance: mask/image dimension mismatch");
  ObjectInstance inst;
  inst.mask = mask;
  Box b{mask.width, mask.height, -1, -1};
  long n = 0;
  double sr = 0, sg = 0, sb = 0;
  long long sx = 0, sy = 0;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      ++n;
      const Rgb& p = image.at(x, y);
      sr += p.r;
      sg += p.g;
      sb += p.b;
      sx += x;
      sy += y;
      b.x_min = std::min(b.x_min, x);
      b.y_min = std::min(b.y_min, y);
      b.x_max = std::max(b.x_max, x);
      b.y_max = std::max(b.y_max, y);
    }
  if (n == 0) throw StructuralError("derive_instance: empty mask");
  inst.area = n;
  inst.mean_color = {sr / n, sg / n, sb / n};
  inst.bbox = b;
  inst.bbox_diagonal = b.diagonal();
  inst.sum_x = sx;
  inst.sum_y = sy;
  inst.centroid_x = static_cast<double>(sx) / n;
  inst.centroid_y = static_cast<double>(sy) / n;
  inst.boundary = inner_boundary(mask);
  return inst;
}

}  // namespace maskprof
