#include <png.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "shadowkit/data_io.hpp"

namespace shadowkit::io {

namespace {

struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

std::vector<std::uint8_t> read_bytes(const fs::path& path, std::uint32_t format, int& width,
                                     int& height) {
  PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + png.image.message);
  }
  png.image.format = format;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
    throw IoError("cannot decode PNG '" + path.string() + "': " + png.image.message);
  }
  width = static_cast<int>(png.image.width);
  height = static_cast<int>(png.image.height);
  return buffer;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& buffer, int width,
                 int height, std::uint32_t format) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = format;
  if (!png_image_write_to_file(&png.image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + png.image.message);
  }
}

}  // namespace

std::uint8_t to_byte(double v) noexcept {
  // nearbyint honours the default round-half-to-even mode.
  const double scaled = std::nearbyint(std::clamp(v, 0.0, 1.0) * 255.0);
  return static_cast<std::uint8_t>(scaled);
}

ImageRGB read_png_rgb(const fs::path& path) {
  int w = 0, h = 0;
  const auto bytes = read_bytes(path, PNG_FORMAT_RGB, w, h);
  ImageRGB img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = {bytes[3 * i] / 255.0, bytes[3 * i + 1] / 255.0, bytes[3 * i + 2] / 255.0};
  }
  return img;
}

GrayImage read_png_gray(const fs::path& path) {
  // Read as RGB and keep the first channel: the simplified API's RGB->gray
  // conversion is colour-managed and not the identity on gray data.
  int w = 0, h = 0;
  const auto bytes = read_bytes(path, PNG_FORMAT_RGB, w, h);
  GrayImage img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = bytes[3 * i] / 255.0;
  return img;
}

ShadowMask read_png_mask(const fs::path& path) {
  int w = 0, h = 0;
  const auto bytes = read_bytes(path, PNG_FORMAT_RGB, w, h);
  ShadowMask mask(w, h);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = bytes[3 * i] >= 128 ? 1 : 0;
  return mask;
}

void write_png_rgb(const fs::path& path, const Grid<Rgb>& img) {
  std::vector<std::uint8_t> bytes(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (int c = 0; c < 3; ++c) bytes[3 * i + static_cast<std::size_t>(c)] = to_byte(img[i][c]);
  }
  write_bytes(path, bytes, img.width(), img.height(), PNG_FORMAT_RGB);
}

void write_png_gray(const fs::path& path, const GrayImage& img) {
  std::vector<std::uint8_t> bytes(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) bytes[i] = to_byte(img[i]);
  write_bytes(path, bytes, img.width(), img.height(), PNG_FORMAT_GRAY);
}

void write_png_mask(const fs::path& path, const Grid<std::uint8_t>& mask) {
  std::vector<std::uint8_t> bytes(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] ? 255 : 0;
  write_bytes(path, bytes, mask.width(), mask.height(), PNG_FORMAT_GRAY);
}

}  // namespace shadowkit::io
