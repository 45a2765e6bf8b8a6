#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "shadowkit/image.hpp"
#include "shadowkit/synth.hpp"

namespace testing {

using shadowkit::synth::Lcg64;

inline shadowkit::ImageRGB random_image(Lcg64& rng, int w, int h, double lo = 0.0, double hi = 1.0) {
  shadowkit::ImageRGB img(w, h);
  for (auto& p : img.pixels()) {
    for (double& c : p) c = rng.uniform(lo, hi);
  }
  return img;
}

inline shadowkit::GrayImage random_gray(Lcg64& rng, int w, int h) {
  shadowkit::GrayImage img(w, h);
  for (double& v : img.pixels()) v = rng.uniform();
  return img;
}

inline shadowkit::ShadowMask random_mask(Lcg64& rng, int w, int h, double p = 0.5) {
  shadowkit::ShadowMask m(w, h);
  for (auto& v : m.pixels()) v = rng.uniform() < p ? 1 : 0;
  return m;
}

/// Axis-aligned rectangle [x0, x1) x [y0, y1).
inline shadowkit::ShadowMask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  shadowkit::ShadowMask m(w, h);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m(x, y) = 1;
  }
  return m;
}

/// Image whose values are exact multiples of 1/255.
inline shadowkit::ImageRGB byte_image(Lcg64& rng, int w, int h) {
  shadowkit::ImageRGB img(w, h);
  for (auto& p : img.pixels()) {
    for (double& c : p) c = static_cast<double>(rng.next() >> 56) / 255.0;
  }
  return img;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("shadowkit_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
