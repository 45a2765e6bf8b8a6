#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shadowkit/error.hpp"

namespace shadowkit {

using Rgb = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

/// Row-major W×H container. Pixel (x, y) lives at index y*width + x.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw DomainError("grid dimensions must be at least 1x1, got " + std::to_string(width) +
                        "x" + std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// H×W×3 image, channel values in [0,1].
class ImageRGB : public Grid<Rgb> {
 public:
  using Grid::Grid;
  /// Throws DomainError on non-finite or out-of-[0,1] channel values.
  void validate() const;
};

/// Sum-normalized chromaticity; components positive and summing to 1.
class ChromaticityMap : public Grid<Rgb> {
 public:
  using Grid::Grid;
};

/// Per-channel natural log of a ChromaticityMap.
class LogChromaMap : public Grid<Rgb> {
 public:
  using Grid::Grid;
};

/// Coordinates on the plane orthogonal to (1,1,1) in log-chromaticity space.
class Plane2DMap : public Grid<Vec2> {
 public:
  using Grid::Grid;
};

/// Single-channel real image.
class GrayImage : public Grid<double> {
 public:
  using Grid::Grid;
};

/// Binary region mask, values in {0,1}.
class ShadowMask : public Grid<std::uint8_t> {
 public:
  using Grid::Grid;
  void validate() const;
  std::size_t count() const noexcept;
  ShadowMask complement() const;
};

/// Binary shadow-boundary band, values in {0,1}.
class EdgeMask : public Grid<std::uint8_t> {
 public:
  using Grid::Grid;
  std::size_t count() const noexcept;
};

/// Scalar loss with its gradient with respect to every output channel value.
struct LossResult {
  double loss = 0.0;
  Grid<Rgb> gradient;
};

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) +
                      "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                      "x" + std::to_string(b.height()) + ")");
  }
}

/// ITU-R BT.601 luma of an RGB triple.
constexpr double luminance(const Rgb& c) noexcept {
  return 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
}

GrayImage luminance(const ImageRGB& img);

}  // namespace shadowkit
