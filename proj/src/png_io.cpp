#include "maskprof/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "maskprof/errors.hpp"

namespace maskprof {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Decodes any 8/16-bit PNG into packed 8-bit RGB rows.
std::vector<std::uint8_t> read_rows(const std::filesystem::path& path, int* w, int* h) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw LoadError("cannot open PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw LoadError("libpng init failed for " + path.string());
  }
  std::vector<std::uint8_t> data;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw LoadError("failed to decode PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  *w = static_cast<int>(png_get_image_width(png, info));
  *h = static_cast<int>(png_get_image_height(png, info));
  const std::size_t stride = png_get_rowbytes(png, info);
  data.resize(stride * *h);
  rows.resize(*h);
  for (int y = 0; y < *h; ++y) rows[y] = data.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return data;
}

void write_rows(const std::filesystem::path& path, int w, int h, int color_type,
                const std::vector<png_bytep>& rows) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw LoadError("cannot create PNG file: " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw LoadError("libpng init failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw LoadError("failed to encode PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, w, h, 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytep*>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  int w = 0, h = 0;
  std::vector<std::uint8_t> data = read_rows(path, &w, &h);
  RgbImage img = RgbImage::filled(w, h);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = {data[3 * i], data[3 * i + 1], data[3 * i + 2]};
  return img;
}

std::vector<std::uint8_t> read_png_gray(const std::filesystem::path& path, int* width,
                                        int* height) {
  std::vector<std::uint8_t> data = read_rows(path, width, height);
  std::vector<std::uint8_t> gray(data.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    // BT.601 luma, rounded; grayscale sources pass through unchanged
    const double y = 0.299 * data[3 * i] + 0.587 * data[3 * i + 1] + 0.114 * data[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>(y + 0.5);
  }
  return gray;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image) {
  std::vector<std::uint8_t> data(image.pixels.size() * 3);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    data[3 * i] = image.pixels[i].r;
    data[3 * i + 1] = image.pixels[i].g;
    data[3 * i + 2] = image.pixels[i].b;
  }
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y)
    rows[y] = data.data() + static_cast<std::size_t>(y) * image.width * 3;
  write_rows(path, image.width, image.height, PNG_COLOR_TYPE_RGB, rows);
}

void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& bytes) {
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(bytes.data()) + static_cast<std::size_t>(y) * width;
  write_rows(path, width, height, PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace maskprof
