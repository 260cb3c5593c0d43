#include "maskprof/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "maskprof/errors.hpp"
#include "maskprof/rng.hpp"

namespace maskprof {

namespace {

constexpr double kPi = std::numbers::pi;

struct ShapeRaster {
  BinaryMask mask;  // canvas-sized, placed
  Box bbox;
};

// Rasterizes an implicit shape (unit local coordinates, rotated) at the canvas
// center, then reports its tight bbox so the caller can translate it freely.
template <typename InsideFn>
ShapeRaster raster_shape(int canvas, double radius, double angle, InsideFn inside) {
  ShapeRaster out{BinaryMask::zeros(canvas, canvas), {canvas, canvas, -1, -1}};
  const double c = std::cos(angle), s = std::sin(angle);
  const double cx = canvas / 2.0, cy = canvas / 2.0;
  const int reach = static_cast<int>(std::ceil(radius * 1.6)) + 1;
  const int x0 = std::max(0, static_cast<int>(cx) - reach);
  const int x1 = std::min(canvas - 1, static_cast<int>(cx) + reach);
  for (int y = x0; y <= x1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      const double lx = (dx * c + dy * s) / radius;
      const double ly = (-dx * s + dy * c) / radius;
      if (!inside(lx, ly)) continue;
      out.mask.set(x, y, 1);
      out.bbox.x_min = std::min(out.bbox.x_min, x);
      out.bbox.y_min = std::min(out.bbox.y_min, y);
      out.bbox.x_max = std::max(out.bbox.x_max, x);
      out.bbox.y_max = std::max(out.bbox.y_max, y);
    }
  return out;
}

// Moves the rasterized shape to a uniformly random in-canvas position.
bool place_random(Rng& rng, ShapeRaster& shape, int canvas) {
  if (shape.bbox.x_max < 0) return false;
  const int w = shape.bbox.span_x(), h = shape.bbox.span_y();
  if (w > canvas || h > canvas) return false;
  const int nx = static_cast<int>(draw_below(rng, canvas - w + 1));
  const int ny = static_cast<int>(draw_below(rng, canvas - h + 1));
  BinaryMask placed = BinaryMask::zeros(canvas, canvas);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (shape.mask.get(shape.bbox.x_min + x, shape.bbox.y_min + y)) placed.set(nx + x, ny + y, 1);
  shape.mask = std::move(placed);
  shape.bbox = {nx, ny, nx + w - 1, ny + h - 1};
  return true;
}

Rgb random_color(Rng& rng) {
  return {static_cast<std::uint8_t>(draw_below(rng, 256)),
          static_cast<std::uint8_t>(draw_below(rng, 256)),
          static_cast<std::uint8_t>(draw_below(rng, 256))};
}

std::uint8_t clamp_channel(long v) {
  return static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
}

Rgb jitter(Rng& rng, Rgb base, int amp) {
  return {clamp_channel(base.r + draw_int(rng, -amp, amp)),
          clamp_channel(base.g + draw_int(rng, -amp, amp)),
          clamp_channel(base.b + draw_int(rng, -amp, amp))};
}

double value_noise(std::uint64_t seed, double x, double y, double cell) {
  const double fx = x / cell, fy = y / cell;
  const long ix = static_cast<long>(std::floor(fx));
  const long iy = static_cast<long>(std::floor(fy));
  auto lattice = [&](long gx, long gy) {
    const std::uint64_t h =
        mix64(seed, (static_cast<std::uint64_t>(gx) << 32) ^ static_cast<std::uint32_t>(gy));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double tx = smooth(fx - ix), ty = smooth(fy - iy);
  const double a = lattice(ix, iy), b = lattice(ix + 1, iy);
  const double c2 = lattice(ix, iy + 1), d = lattice(ix + 1, iy + 1);
  return (a * (1 - tx) + b * tx) * (1 - ty) + (c2 * (1 - tx) + d * tx) * ty;
}

// ----- dsprites-style: uniform-color ellipse / square / heart sprites -----

ShapeRaster dsprites_shape(Rng& rng, int canvas) {
  const int kind = static_cast<int>(draw_below(rng, 3));
  const double diag = draw_real(rng, 26.0, 46.0);
  const double radius = diag / (2.0 * std::numbers::sqrt2);
  const double angle = draw_real(rng, 0.0, 2.0 * kPi);
  switch (kind) {
    case 0: {
      const double aspect = draw_real(rng, 0.55, 1.0);
      return raster_shape(canvas, radius, angle, [aspect](double x, double y) {
        return x * x + (y / aspect) * (y / aspect) <= 1.0;
      });
    }
    case 1:
      return raster_shape(canvas, radius, angle, [](double x, double y) {
        return std::max(std::abs(x), std::abs(y)) <= 0.78;
      });
    default:
      return raster_shape(canvas, radius * 1.2, angle, [](double x, double y) {
        const double yy = -y;  // raster y grows downward
        const double f = x * x + yy * yy - 1.0;
        return f * f * f - x * x * yy * yy * yy <= 0.0;
      });
  }
}

bool build_layered_scene(Rng& rng, Scene& scene, int canvas, int n_objects,
                         double min_visible_ratio, long min_visible_px, bool complex_textures) {
  std::vector<ShapeRaster> shapes;
  std::vector<Rgb> base_colors;
  const Rgb scene_base = complex_textures
                             ? Rgb{clamp_channel(draw_int(rng, 40, 215)),
                                   clamp_channel(draw_int(rng, 40, 215)),
                                   clamp_channel(draw_int(rng, 40, 215))}
                             : Rgb{};
  std::vector<std::array<Rgb, 3>> palettes;
  std::vector<std::uint64_t> noise_seeds;
  for (int k = 0; k < n_objects; ++k) {
    ShapeRaster shape;
    if (complex_textures) {
      const double diag = std::exp(draw_real(rng, std::log(15.0), std::log(90.0)));
      const double radius = diag / (2.0 * std::numbers::sqrt2);
      const double angle = draw_real(rng, 0.0, 2.0 * kPi);
      if (draw_below(rng, 3) < 2) {
        const int spikes = static_cast<int>(draw_int(rng, 5, 9));
        const double inner = draw_real(rng, 0.35, 0.6);
        shape = raster_shape(canvas, radius, angle, [spikes, inner](double x, double y) {
          const double rho = std::sqrt(x * x + y * y);
          if (rho > 1.0) return false;
          const double theta = std::atan2(y, x) + kPi;
          double t = theta * spikes / (2.0 * kPi);
          t -= std::floor(t);
          const double envelope = inner + (1.0 - inner) * (1.0 - 2.0 * std::abs(t - 0.5));
          return rho <= envelope;
        });
      } else {
        const double cut_x = draw_real(rng, -0.2, 0.3);
        const double cut_y = draw_real(rng, -0.2, 0.3);
        shape = raster_shape(canvas, radius, angle, [cut_x, cut_y](double x, double y) {
          if (std::abs(x) > 0.82 || std::abs(y) > 0.82) return false;
          return !(x >= cut_x && y >= cut_y);
        });
      }
    } else {
      shape = dsprites_shape(rng, canvas);
    }
    if (!place_random(rng, shape, canvas)) return false;
    shapes.push_back(std::move(shape));
    if (complex_textures) {
      const Rgb c0 = jitter(rng, scene_base, 35);
      palettes.push_back({c0, jitter(rng, c0, 50), jitter(rng, c0, 50)});
      noise_seeds.push_back(rng());
      base_colors.push_back(c0);
    } else {
      base_colors.push_back(random_color(rng));
    }
  }
  // later objects over earlier ones
  std::vector<BinaryMask> visible(shapes.size());
  for (std::size_t k = 0; k < shapes.size(); ++k) visible[k] = shapes[k].mask;
  for (std::size_t k = 0; k < shapes.size(); ++k)
    for (std::size_t later = k + 1; later < shapes.size(); ++later)
      for (std::size_t i = 0; i < visible[k].bits.size(); ++i)
        if (shapes[later].mask.bits[i]) visible[k].bits[i] = 0;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const long full = shapes[k].mask.count();
    const long vis = visible[k].count();
    if (vis < min_visible_px || vis < min_visible_ratio * full) return false;
  }
  scene.image = RgbImage::filled(canvas, canvas, {0, 0, 0});
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    for (int y = 0; y < canvas; ++y)
      for (int x = 0; x < canvas; ++x) {
        if (!shapes[k].mask.get(x, y)) continue;
        if (complex_textures) {
          const double n = 0.65 * value_noise(noise_seeds[k], x, y, 11.0) +
                           0.35 * value_noise(mix64(noise_seeds[k], 3), x, y, 5.0);
          const auto& pal = palettes[k];
          scene.image.at(x, y) = n < 0.42 ? pal[0] : (n < 0.58 ? pal[1] : pal[2]);
        } else {
          scene.image.at(x, y) = base_colors[k];
        }
      }
  }
  scene.objects = std::move(visible);
  return true;
}

// ----- tetris-style: disjoint tetromino pieces -----

const int kTetromino[7][4][2] = {
    {{0, 0}, {1, 0}, {2, 0}, {3, 0}},  // I
    {{0, 0}, {1, 0}, {0, 1}, {1, 1}},  // O
    {{0, 0}, {1, 0}, {2, 0}, {1, 1}},  // T
    {{1, 0}, {2, 0}, {0, 1}, {1, 1}},  // S
    {{0, 0}, {1, 0}, {1, 1}, {2, 1}},  // Z
    {{0, 0}, {0, 1}, {1, 1}, {2, 1}},  // J
    {{2, 0}, {0, 1}, {1, 1}, {2, 1}},  // L
};

bool build_tetris_scene(Rng& rng, Scene& scene, int canvas, int n_objects) {
  BinaryMask occupied = BinaryMask::zeros(canvas, canvas);
  std::vector<BinaryMask> masks;
  std::vector<Rgb> colors;
  for (int k = 0; k < n_objects; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      const int piece = static_cast<int>(draw_below(rng, 7));
      const int rot = static_cast<int>(draw_below(rng, 4));
      const int cell = static_cast<int>(draw_int(rng, 7, 12));
      int cw = 0, ch = 0;
      int cells[4][2];
      for (int i = 0; i < 4; ++i) {
        int cxi = kTetromino[piece][i][0], cyi = kTetromino[piece][i][1];
        for (int r = 0; r < rot; ++r) {
          const int tmp = cxi;
          cxi = -cyi;
          cyi = tmp;
        }
        cells[i][0] = cxi;
        cells[i][1] = cyi;
      }
      int min_cx = cells[0][0], min_cy = cells[0][1];
      for (int i = 1; i < 4; ++i) {
        min_cx = std::min(min_cx, cells[i][0]);
        min_cy = std::min(min_cy, cells[i][1]);
      }
      for (int i = 0; i < 4; ++i) {
        cells[i][0] -= min_cx;
        cells[i][1] -= min_cy;
        cw = std::max(cw, cells[i][0] + 1);
        ch = std::max(ch, cells[i][1] + 1);
      }
      const int pw = cw * cell, ph = ch * cell;
      if (pw > canvas || ph > canvas) continue;
      const int px = static_cast<int>(draw_below(rng, canvas - pw + 1));
      const int py = static_cast<int>(draw_below(rng, canvas - ph + 1));
      bool overlap = false;
      for (int i = 0; i < 4 && !overlap; ++i)
        for (int y = 0; y < cell && !overlap; ++y)
          for (int x = 0; x < cell; ++x)
            if (occupied.get(px + cells[i][0] * cell + x, py + cells[i][1] * cell + y)) {
              overlap = true;
              break;
            }
      if (overlap) continue;
      BinaryMask mask = BinaryMask::zeros(canvas, canvas);
      for (int i = 0; i < 4; ++i)
        for (int y = 0; y < cell; ++y)
          for (int x = 0; x < cell; ++x) {
            mask.set(px + cells[i][0] * cell + x, py + cells[i][1] * cell + y, 1);
            occupied.set(px + cells[i][0] * cell + x, py + cells[i][1] * cell + y, 1);
          }
      masks.push_back(std::move(mask));
      colors.push_back(random_color(rng));
      placed = true;
    }
    if (!placed) return false;
  }
  scene.image = RgbImage::filled(canvas, canvas, {0, 0, 0});
  for (std::size_t k = 0; k < masks.size(); ++k)
    for (int y = 0; y < canvas; ++y)
      for (int x = 0; x < canvas; ++x)
        if (masks[k].get(x, y)) scene.image.at(x, y) = colors[k];
  scene.objects = std::move(masks);
  return true;
}

}  // namespace

SynthStyle parse_style(const std::string& name) {
  if (name == "dsprites") return SynthStyle::dsprites;
  if (name == "tetris") return SynthStyle::tetris;
  if (name == "complex") return SynthStyle::complex_scenes;
  throw ConfigError("unknown style '" + name + "' (expected dsprites, tetris or complex)");
}

std::string style_name(SynthStyle style) {
  switch (style) {
    case SynthStyle::dsprites: return "dsprites";
    case SynthStyle::tetris: return "tetris";
    default: return "complex";
  }
}

Scene generate_scene(const GeneratorConfig& config, long index) {
  char id[64];
  std::snprintf(id, sizeof(id), "%s_%06ld", style_name(config.style).c_str(), index);
  // K is pinned per scene index so placement retries cannot skew its
  // distribution away from uniform
  Rng k_rng(mix64(config.seed, static_cast<std::uint64_t>(index)));
  const int k = config.k_min + static_cast<int>(draw_below(k_rng, config.k_max - config.k_min + 1));
  for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
    Rng rng(mix64(mix64(config.seed, static_cast<std::uint64_t>(index)) ^ 0x9e37, attempt));
    Scene scene;
    scene.id = id;
    bool ok = false;
    switch (config.style) {
      case SynthStyle::dsprites:
        ok = build_layered_scene(rng, scene, config.canvas, k, 0.78, 12, false);
        break;
      case SynthStyle::tetris:
        ok = build_tetris_scene(rng, scene, config.canvas, k);
        break;
      case SynthStyle::complex_scenes:
        ok = build_layered_scene(rng, scene, config.canvas, k, 0.45, 30, true);
        break;
    }
    if (ok) return scene;
  }
  throw ConfigError("scene generation failed to converge for " + std::string(id));
}

std::vector<Scene> generate(const GeneratorConfig& config) {
  if (config.count <= 0) throw ConfigError("generator count must be positive");
  std::vector<Scene> scenes(config.count);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < config.count; ++i) scenes[i] = generate_scene(config, i);
  return scenes;
}

bool curate_scene(Scene& scene, long min_pixels, long max_pixels) {
  std::vector<BinaryMask> kept;
  for (auto& mask : scene.objects) {
    const long n = mask.count();
    if (n >= min_pixels && n <= max_pixels) kept.push_back(std::move(mask));
  }
  if (kept.size() < 2 || kept.size() > 6) return false;
  scene.objects = std::move(kept);
  BinaryMask covered = BinaryMask::zeros(scene.image.width, scene.image.height);
  for (const auto& m : scene.objects)
    for (std::size_t i = 0; i < m.bits.size(); ++i) covered.bits[i] |= m.bits[i];
  for (std::size_t i = 0; i < covered.bits.size(); ++i)
    if (!covered.bits[i]) scene.image.pixels[i] = {0, 0, 0};
  return true;
}

std::vector<Scene> curate(const std::vector<Scene>& raw, long min_pixels, long max_pixels) {
  std::vector<Scene> out;
  for (const auto& scene : raw) {
    Scene copy = scene;
    if (curate_scene(copy, min_pixels, max_pixels)) out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace maskprof
