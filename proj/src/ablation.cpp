#include "maskprof/ablation.hpp"

#include <algorithm>
#include <cmath>

#include "maskprof/errors.hpp"
#include "maskprof/raster.hpp"
#include "maskprof/rng.hpp"

namespace maskprof {

namespace {

// Per-op bookkeeping keyed by the indices of the scene the op received; the
// engine translates these into original object indices.
struct OpTrace {
  std::vector<int> dropped;
  std::vector<int> occluded;
  std::vector<int> clipped;
  std::vector<double> scales;
  std::vector<int> textures;
};

// A transformed object before compositing: its mask plus a color patch.
struct Layer {
  BinaryMask mask;
  RgbImage colors;  // valid wherever mask is set
};

Layer layer_from(const Scene& scene, const BinaryMask& mask) {
  Layer l{mask, RgbImage::filled(mask.width, mask.height)};
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.get(x, y)) l.colors.at(x, y) = scene.image.at(x, y);
  return l;
}

// Later objects paint over earlier ones. Fully hidden objects are dropped;
// partially hidden ones are flagged as occluded. With trim_masks the written
// masks are the visible regions; without it they keep their full extent
// (overlapping masks are a permitted scene state), which the S op relies on
// so that every surviving mask stays a convex raster.
Scene composite(const Scene& original, const std::vector<Layer>& layers, OpTrace* trace,
                bool trim_masks) {
  const int w = original.image.width, h = original.image.height;
  Scene out;
  out.id = original.id;
  out.image = RgbImage::filled(w, h, {0, 0, 0});
  std::vector<BinaryMask> visible(layers.size());
  for (std::size_t k = 0; k < layers.size(); ++k) visible[k] = layers[k].mask;
  for (std::size_t k = 0; k < layers.size(); ++k)
    for (std::size_t later = k + 1; later < layers.size(); ++later)
      for (std::size_t i = 0; i < visible[k].bits.size(); ++i)
        if (layers[later].mask.bits[i]) visible[k].bits[i] = 0;

  for (std::size_t k = 0; k < layers.size(); ++k) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (layers[k].mask.get(x, y)) out.image.at(x, y) = layers[k].colors.at(x, y);
    const long vis = visible[k].count();
    if (vis == 0) {
      if (trace) trace->dropped.push_back(static_cast<int>(k));
      continue;
    }
    if (trace && vis != layers[k].mask.count()) trace->occluded.push_back(static_cast<int>(k));
    out.objects.push_back(trim_masks ? std::move(visible[k]) : layers[k].mask);
  }
  return out;
}

Rgb rounded_mean_color(const Scene& scene, const BinaryMask& mask) {
  double sr = 0, sg = 0, sb = 0;
  long n = 0;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.get(x, y)) {
        const Rgb& p = scene.image.at(x, y);
        sr += p.r;
        sg += p.g;
        sb += p.b;
        ++n;
      }
  return {static_cast<std::uint8_t>(std::lround(sr / n)),
          static_cast<std::uint8_t>(std::lround(sg / n)),
          static_cast<std::uint8_t>(std::lround(sb / n))};
}

// Hull raster with every newly covered pixel taking the color of the nearest
// original object pixel (squared Euclidean; the row-major scan with a strict
// comparison makes ties go to the smallest row-major index).
Layer convexify(const Scene& scene, const BinaryMask& mask) {
  const BinaryMask hull = convex_hull(mask).raster;
  Layer l = layer_from(scene, mask);
  std::vector<std::pair<int, int>> originals;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.get(x, y)) originals.emplace_back(x, y);
  for (int y = 0; y < hull.height; ++y)
    for (int x = 0; x < hull.width; ++x) {
      if (!hull.get(x, y) || mask.get(x, y)) continue;
      long long best = -1;
      std::pair<int, int> src{0, 0};
      for (const auto& [ox, oy] : originals) {
        const long long dx = x - ox, dy = y - oy;
        const long long d = dx * dx + dy * dy;
        if (best < 0 || d < best) {
          best = d;
          src = {ox, oy};
        }
      }
      l.colors.at(x, y) = scene.image.at(src.first, src.second);
    }
  l.mask = hull;
  return l;
}

// Inverse nearest-neighbor resample about the centroid at scale s.
Layer resample_at(const Scene& scene, const BinaryMask& mask, double cx, double cy, double s) {
  const int w = mask.width, h = mask.height;
  Layer l{BinaryMask::zeros(w, h), RgbImage::filled(w, h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int sx = static_cast<int>(std::floor(cx + (x + 0.5 - cx) / s));
      const int sy = static_cast<int>(std::floor(cy + (y + 0.5 - cy) / s));
      if (!mask.in_bounds(sx, sy) || !mask.get(sx, sy)) continue;
      l.mask.set(x, y, 1);
      l.colors.at(x, y) = scene.image.at(sx, sy);
    }
  return l;
}

double tight_diagonal(const BinaryMask& mask) {
  int x0 = mask.width, y0 = mask.height, x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.get(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return 0.0;
  const double dx = x1 - x0 + 1, dy = y1 - y0 + 1;
  return std::sqrt(dx * dx + dy * dy);
}

struct ScaledLayer {
  Layer layer;
  double scale = 1.0;
  bool clipped = false;
};

// Scales one object toward the target diagonal. Integer rasters cannot always
// land on target with the nominal scale, so the scale is nudged until the
// resampled diagonal is within one pixel (best attempt kept).
ScaledLayer scale_object(const Scene& scene, const BinaryMask& mask, double target) {
  const ObjectInstance inst = derive_instance(mask, scene.image);
  ScaledLayer result;
  if (std::abs(target - inst.bbox_diagonal) <= 0.5) {
    result.layer = layer_from(scene, mask);
    return result;
  }
  const double cx = inst.centroid_x, cy = inst.centroid_y;
  auto clipped_at = [&](double scale) {
    return cx + (inst.bbox.x_min - cx) * scale < 0.0 ||
           cx + (inst.bbox.x_max + 1 - cx) * scale > mask.width ||
           cy + (inst.bbox.y_min - cy) * scale < 0.0 ||
           cy + (inst.bbox.y_max + 1 - cy) * scale > mask.height;
  };
  double s = target / inst.bbox_diagonal;
  Layer best;
  double best_err = -1.0, best_scale = 1.0;
  for (int iter = 0; iter < 6; ++iter) {
    Layer cand = resample_at(scene, mask, cx, cy, s);
    const double d = tight_diagonal(cand.mask);
    const double err = std::abs(d - target);
    if (best_err < 0.0 || err < best_err) {
      best = std::move(cand);
      best_err = err;
      best_scale = s;
    }
    if (best_err <= 1.0 || d <= 0.0) break;
    s *= target / d;
  }
  result.layer = std::move(best);
  result.scale = best_scale;
  result.clipped = clipped_at(best_scale);
  return result;
}

Scene apply_S(const Scene& scene, OpTrace* trace) {
  std::vector<Layer> layers;
  layers.reserve(scene.objects.size());
  for (const auto& mask : scene.objects) layers.push_back(convexify(scene, mask));
  return composite(scene, layers, trace, /*trim_masks=*/false);
}

Scene apply_U(const Scene& scene, double target_diagonal, OpTrace* trace) {
  if (target_diagonal <= 0.0) throw ConfigError("target diagonal must be positive");
  std::vector<Layer> layers;
  layers.reserve(scene.objects.size());
  if (trace) trace->scales.assign(scene.objects.size(), 1.0);
  for (std::size_t k = 0; k < scene.objects.size(); ++k) {
    ScaledLayer scaled = scale_object(scene, scene.objects[k], target_diagonal);
    if (trace) {
      trace->scales[k] = scaled.scale;
      if (scaled.clipped) trace->clipped.push_back(static_cast<int>(k));
    }
    layers.push_back(std::move(scaled.layer));
  }
  return composite(scene, layers, trace, /*trim_masks=*/true);
}

Scene apply_T(const Scene& scene, const std::vector<RgbImage>& texture_bank, std::uint64_t seed,
              OpTrace* trace) {
  const std::size_t k = scene.objects.size();
  if (texture_bank.size() < k)
    throw ConfigError("texture bank has " + std::to_string(texture_bank.size()) +
                      " textures but the scene has " + std::to_string(k) + " objects");
  // partial Fisher-Yates draw of k distinct bank indices
  Rng rng(seed);
  std::vector<int> indices(texture_bank.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + draw_below(rng, indices.size() - i);
    std::swap(indices[i], indices[j]);
  }
  if (trace) trace->textures.assign(indices.begin(), indices.begin() + k);
  Scene out = scene;
  for (std::size_t obj = 0; obj < k; ++obj) {
    const RgbImage& tex = texture_bank[indices[obj]];
    for (int y = 0; y < scene.image.height; ++y)
      for (int x = 0; x < scene.image.width; ++x)
        if (scene.objects[obj].get(x, y)) out.image.at(x, y) = tex.at(x % tex.width, y % tex.height);
  }
  return out;
}

// Folds an op trace (indexed by the op's input scene) into the provenance
// (indexed by original objects) and updates the current->original map.
void fold_trace(const OpTrace& trace, std::vector<int>& orig, SceneProvenance& prov) {
  for (int i : trace.occluded) prov.occluded.push_back(orig[i]);
  for (int i : trace.clipped) prov.canvas_clipped.push_back(orig[i]);
  for (std::size_t i = 0; i < trace.scales.size(); ++i) prov.scale_factors[orig[i]] = trace.scales[i];
  for (std::size_t i = 0; i < trace.textures.size(); ++i)
    prov.texture_assignment[orig[i]] = trace.textures[i];
  if (!trace.dropped.empty()) {
    for (int i : trace.dropped) prov.dropped_objects.push_back(orig[i]);
    std::vector<int> kept;
    kept.reserve(orig.size() - trace.dropped.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < orig.size(); ++i) {
      if (d < trace.dropped.size() && trace.dropped[d] == static_cast<int>(i))
        ++d;
      else
        kept.push_back(orig[i]);
    }
    orig = std::move(kept);
  }
}

void dedup(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::string> AblationSpec::canonical_ops() const {
  std::vector<std::string> ops;
  if (op_s) ops.push_back("S");
  if (op_u) ops.push_back("U");
  if (op_t) ops.push_back("T");
  if (op_c) ops.push_back("C");
  return ops;
}

AblationSpec parse_ops(const std::string& ops) {
  AblationSpec spec;
  for (char c : ops) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'C': spec.op_c = true; break;
      case 'S': spec.op_s = true; break;
      case 'T': spec.op_t = true; break;
      case 'U': spec.op_u = true; break;
      case ',':
      case ' ':
      case '+': break;
      default:
        throw ConfigError(std::string("unknown ablation op '") + c + "' (expected C,S,T,U)");
    }
  }
  return spec;
}

Scene ablate_C(const Scene& scene) {
  Scene out = scene;
  // means computed first, then painted in object order
  std::vector<Rgb> means;
  means.reserve(scene.objects.size());
  for (const auto& mask : scene.objects) means.push_back(rounded_mean_color(scene, mask));
  for (std::size_t k = 0; k < scene.objects.size(); ++k)
    for (int y = 0; y < scene.image.height; ++y)
      for (int x = 0; x < scene.image.width; ++x)
        if (scene.objects[k].get(x, y)) out.image.at(x, y) = means[k];
  return out;
}

Scene ablate_S(const Scene& scene, SceneProvenance* prov) {
  OpTrace trace;
  Scene out = apply_S(scene, &trace);
  if (prov) {
    for (int i : trace.dropped) prov->dropped_objects.push_back(i);
    for (int i : trace.occluded) prov->occluded.push_back(i);
  }
  return out;
}

Scene ablate_T(const Scene& scene, const std::vector<RgbImage>& texture_bank, std::uint64_t seed,
               SceneProvenance* prov) {
  OpTrace trace;
  Scene out = apply_T(scene, texture_bank, seed, &trace);
  if (prov) prov->texture_assignment.assign(trace.textures.begin(), trace.textures.end());
  return out;
}

Scene ablate_U(const Scene& scene, double target_diagonal, SceneProvenance* prov) {
  OpTrace trace;
  Scene out = apply_U(scene, target_diagonal, &trace);
  if (prov) {
    prov->scale_factors = trace.scales;
    for (int i : trace.dropped) prov->dropped_objects.push_back(i);
    for (int i : trace.occluded) prov->occluded.push_back(i);
    for (int i : trace.clipped) prov->canvas_clipped.push_back(i);
  }
  return out;
}

AblatedScene ablate(const Scene& scene, const AblationSpec& spec) {
  AblatedScene result;
  SceneProvenance& prov = result.provenance;
  prov.id = scene.id;
  prov.texture_assignment.assign(scene.objects.size(), -1);
  prov.scale_factors.assign(scene.objects.size(), 1.0);
  std::vector<int> orig(scene.objects.size());
  for (std::size_t i = 0; i < orig.size(); ++i) orig[i] = static_cast<int>(i);

  Scene cur = scene;
  if (spec.op_s) {
    OpTrace trace;
    cur = apply_S(cur, &trace);
    fold_trace(trace, orig, prov);
  }
  if (spec.op_u) {
    OpTrace trace;
    cur = apply_U(cur, spec.target_diagonal, &trace);
    fold_trace(trace, orig, prov);
    if (spec.op_s) {
      // nearest-neighbor scaling can break raster convexity; restore it
      OpTrace trace2;
      cur = apply_S(cur, &trace2);
      fold_trace(trace2, orig, prov);
    }
  }
  if (spec.op_t) {
    const auto& bank = spec.texture_bank.empty() ? builtin_texture_bank() : spec.texture_bank;
    OpTrace trace;
    cur = apply_T(cur, bank, mix64(spec.seed, fnv1a64(scene.id)), &trace);
    fold_trace(trace, orig, prov);
  }
  if (spec.op_c) cur = ablate_C(cur);

  if (spec.any()) {
    // blank background behind the final masks
    BinaryMask covered = BinaryMask::zeros(cur.image.width, cur.image.height);
    for (const auto& m : cur.objects)
      for (std::size_t i = 0; i < m.bits.size(); ++i) covered.bits[i] |= m.bits[i];
    for (std::size_t i = 0; i < covered.bits.size(); ++i)
      if (!covered.bits[i]) cur.image.pixels[i] = {0, 0, 0};
  }
  dedup(prov.occluded);
  dedup(prov.canvas_clipped);
  std::sort(prov.dropped_objects.begin(), prov.dropped_objects.end());
  result.scene = std::move(cur);
  return result;
}

}  // namespace maskprof
