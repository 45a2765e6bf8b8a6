#include "shadowkit/image.hpp"

#include <algorithm>
#include <cmath>

namespace shadowkit {

void ImageRGB::validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (double v : (*this)[i]) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DomainError("image channel value out of [0,1] at pixel " + std::to_string(i));
      }
    }
  }
}

void ShadowMask::validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if ((*this)[i] > 1) {
      throw DomainError("shadow mask is not binary at pixel " + std::to_string(i));
    }
  }
}

std::size_t ShadowMask::count() const noexcept {
  auto px = pixels();
  return static_cast<std::size_t>(std::count(px.begin(), px.end(), std::uint8_t{1}));
}

ShadowMask ShadowMask::complement() const {
  ShadowMask out(width(), height());
  for (std::size_t i = 0; i < size(); ++i) out[i] = (*this)[i] ? 0 : 1;
  return out;
}

std::size_t EdgeMask::count() const noexcept {
  auto px = pixels();
  return static_cast<std::size_t>(std::count(px.begin(), px.end(), std::uint8_t{1}));
}

GrayImage luminance(const ImageRGB& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = luminance(img[i]);
  return out;
}

}  // namespace shadowkit
