#include "shadowkit/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "shadowkit/edges.hpp"

namespace shadowkit::fusion {

void FusionWeights::validate() const {
  const bool in_range = p_hard >= 0.0 && p_hard <= 1.0 && p_soft >= 0.0 && p_soft <= 1.0;
  if (!in_range || std::abs(p_hard + p_soft - 1.0) > 1e-9) {
    throw DomainError("fusion weights must be in [0,1] and sum to 1");
  }
}

double mean_boundary_gradient(const ImageRGB& img, const ShadowMask& mask) {
  require_same_shape(img, mask, "mean_boundary_gradient");
  mask.validate();
  const ShadowMask boundary = edges::boundary_pixels(mask);
  const GrayImage grad = edges::sobel_magnitude(luminance(img));
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i]) {
      total += grad[i];
      ++count;
    }
  }
  return count == 0 ? -1.0 : total / static_cast<double>(count);
}

FusionWeights classify_shadow_softness(const ImageRGB& img, const ShadowMask& mask,
                                       const SoftnessProxy& proxy) {
  if (!(proxy.s > 0.0)) throw DomainError("softness proxy scale must be positive");
  const double g = mean_boundary_gradient(img, mask);
  if (g < 0.0) return {0.5, 0.5};
  const double p_hard = 1.0 / (1.0 + std::exp(-(g - proxy.g0) / proxy.s));
  return {p_hard, 1.0 - p_hard};
}

ImageRGB fuse_outputs(const ImageRGB& hard_out, const ImageRGB& soft_out, const FusionWeights& w) {
  require_same_shape(hard_out, soft_out, "fuse_outputs");
  w.validate();
  ImageRGB out(hard_out.width(), hard_out.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double h = hard_out[i][c];
      const double s = soft_out[i][c];
      // Clamping to the input pair absorbs rounding, so h == s gives h exactly.
      const double mixed = std::clamp(w.p_hard * h + w.p_soft * s, std::min(h, s), std::max(h, s));
      out[i][c] = std::clamp(mixed, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace shadowkit::fusion
