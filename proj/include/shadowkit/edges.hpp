#pragma once

#include <vector>

#include "shadowkit/image.hpp"

namespace shadowkit::edges {

/// Threshold applied to the blurred Sobel response.
inline constexpr double kEdgeThreshold = 1e-6;
/// Stabilizer inside the per-pixel Euclidean norm of the edge loss.
inline constexpr double kNormEpsilon = 1e-8;
inline constexpr double kDefaultSigma = 2.0;

/// Square (2r+1)x(2r+1) correlation kernel, row-major.
struct Kernel {
  int radius = 0;
  std::vector<double> weights;

  int side() const noexcept { return 2 * radius + 1; }
  double at(int dx, int dy) const noexcept {
    return weights[static_cast<std::size_t>((dy + radius) * side() + (dx + radius))];
  }
};

/// Radius ceil(3*sigma), weights exp(-(dx^2+dy^2)/(2 sigma^2)) normalized to 1.
Kernel gaussian_kernel(double sigma);

/// Reflect-101 index mapping (… 2 1 | 0 1 2 … n-1 | n-2 …).
int reflect101(int i, int n) noexcept;

/// 2-D correlation with reflect-101 borders.
GrayImage convolve(const GrayImage& img, const Kernel& kernel);

GrayImage sobel_magnitude(const GrayImage& img);
GrayImage sobel_magnitude(const ShadowMask& mask);

/// Pixels with at least one in-image 4-neighbour of the opposite value.
ShadowMask boundary_pixels(const ShadowMask& mask);

/// 1 where gaussian_blur(sobel_magnitude(mask), sigma) > kEdgeThreshold.
EdgeMask edge_mask(const ShadowMask& mask, double sigma = kDefaultSigma);

/// Sum over masked pixels of sqrt(|gt - out|^2 + eps^2); gradient w.r.t. `out`.
LossResult edge_loss(const ImageRGB& gt, const ImageRGB& out, const EdgeMask& edge);

}  // namespace shadowkit::edges
