#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "maskprof/image.hpp"

namespace maskprof {

// 8-bit PNG wrappers. Readers accept gray/palette/RGB/RGBA sources and reduce
// them; writers always emit 8-bit non-interlaced files with fixed encoder
// settings so identical pixels give identical bytes.
RgbImage read_png_rgb(const std::filesystem::path& path);
std::vector<std::uint8_t> read_png_gray(const std::filesystem::path& path, int* width,
                                        int* height);
void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);
void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& bytes);

}  // namespace maskprof
