#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "maskprof/ablation.hpp"
#include "maskprof/errors.hpp"
#include "maskprof/png_io.hpp"
#include "maskprof/rng.hpp"

namespace maskprof {

namespace {

constexpr int kTexSize = 128;

// Smooth value noise in [0,1]: hashed integer lattice, smoothstep bilinear.
double value_noise(std::uint64_t seed, double x, double y, double cell) {
  const double fx = x / cell, fy = y / cell;
  const long ix = static_cast<long>(std::floor(fx));
  const long iy = static_cast<long>(std::floor(fy));
  auto lattice = [&](long gx, long gy) {
    const std::uint64_t h = mix64(seed, (static_cast<std::uint64_t>(gx) << 32) ^
                                            static_cast<std::uint32_t>(gy));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double tx = smooth(fx - ix), ty = smooth(fy - iy);
  const double a = lattice(ix, iy), b = lattice(ix + 1, iy);
  const double c = lattice(ix, iy + 1), d = lattice(ix + 1, iy + 1);
  return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

double blotch_noise(std::uint64_t seed, double x, double y) {
  return 0.7 * value_noise(seed, x, y, 21.0) + 0.3 * value_noise(mix64(seed, 7), x, y, 9.0);
}

// Each texture modulates one saturated base color with blotchy noise; the
// brightness floor of 0.8 keeps the pairwise mean-color distances above
// 0.5 * 255 * sqrt(3).
RgbImage make_blotchy(std::uint64_t seed, Rgb base) {
  RgbImage tex = RgbImage::filled(kTexSize, kTexSize);
  for (int y = 0; y < kTexSize; ++y)
    for (int x = 0; x < kTexSize; ++x) {
      const double n = blotch_noise(seed, x, y);
      const double f = 0.8 + 0.2 * (n < 0.45 ? 0.2 : (n < 0.6 ? 0.7 : 1.0));
      tex.at(x, y) = {static_cast<std::uint8_t>(std::lround(base.r * f)),
                      static_cast<std::uint8_t>(std::lround(base.g * f)),
                      static_cast<std::uint8_t>(std::lround(base.b * f))};
    }
  return tex;
}

RgbImage center_crop_128(const RgbImage& src) {
  if (src.width < kTexSize || src.height < kTexSize)
    throw ConfigError("texture smaller than 128x128");
  const int ox = (src.width - kTexSize) / 2, oy = (src.height - kTexSize) / 2;
  RgbImage out = RgbImage::filled(kTexSize, kTexSize);
  for (int y = 0; y < kTexSize; ++y)
    for (int x = 0; x < kTexSize; ++x) out.at(x, y) = src.at(ox + x, oy + y);
  return out;
}

}  // namespace

const std::vector<RgbImage>& builtin_texture_bank() {
  static const std::vector<RgbImage> bank = [] {
    const Rgb bases[6] = {{255, 0, 0},   {0, 255, 0},   {0, 0, 255},
                          {255, 255, 0}, {255, 0, 255}, {0, 255, 255}};
    std::vector<RgbImage> textures;
    textures.reserve(6);
    for (int i = 0; i < 6; ++i)
      textures.push_back(make_blotchy(0x5eedb10c7e5ULL + 977 * i, bases[i]));
    return textures;
  }();
  return bank;
}

std::vector<RgbImage> load_texture_bank(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("texture directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<RgbImage> bank;
  for (const auto& f : files) bank.push_back(center_crop_128(read_png_rgb(f)));
  if (bank.size() < 6)
    throw ConfigError("texture bank needs at least 6 PNG files, found " +
                      std::to_string(bank.size()) + " in " + dir);
  return bank;
}

}  // namespace maskprof
