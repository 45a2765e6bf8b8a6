#pragma once

#include "shadowkit/image.hpp"

namespace shadowkit::fusion {

/// Probability pair (p_hard, p_soft); both in [0,1], summing to 1.
struct FusionWeights {
  double p_hard = 0.5;
  double p_soft = 0.5;

  /// Throws DomainError unless both are in [0,1] and sum to 1 within 1e-9.
  void validate() const;
};

/// Logistic parameters of the softness proxy, in luminance units per pixel.
/// The center is the midpoint of mean boundary gradients of synthetic hard
/// (penumbra 0) and soft (penumbra 8 px) shadows over synth seeds 1..10 at
/// attenuation 0.4, rounded to two decimals; see calibrate_softness_proxy.
struct SoftnessProxy {
  double g0 = 0.65;
  double s = 0.05;
};

/// Mean Sobel magnitude of luminance over the mask's 4-neighbour boundary
/// pixels, or a negative value when the boundary set is empty.
double mean_boundary_gradient(const ImageRGB& img, const ShadowMask& mask);

/// Deterministic stand-in for a trained hard/soft classifier:
/// p_hard = logistic((g - g0) / s) with g the mean boundary gradient.
/// An empty boundary yields (0.5, 0.5).
FusionWeights classify_shadow_softness(const ImageRGB& img, const ShadowMask& mask,
                                       const SoftnessProxy& proxy = {});

/// Pixelwise p_hard*hard + p_soft*soft, kept within [min(hard, soft), max(hard, soft)]
/// and [0,1].
ImageRGB fuse_outputs(const ImageRGB& hard_out, const ImageRGB& soft_out, const FusionWeights& w);

}  // namespace shadowkit::fusion
