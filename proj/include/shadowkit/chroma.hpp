#pragma once

// Shadow-free chromaticity by entropy minimization.
//
// Pipeline: sum-normalized chromaticity -> log chromaticity -> 2-D plane
// orthogonal to (1,1,1) -> 1-D projection whose histogram entropy is
// smallest -> lift back with a bright-pixel offset -> renormalize.
// Illumination changes (shadows) move log-chromaticity along a fixed
// direction in the plane; projecting orthogonally to it cancels them.

#include <span>
#include <vector>

#include "shadowkit/image.hpp"

namespace shadowkit::chroma {

/// Per-channel stabilizer added before division and before ln.
inline constexpr double kEpsilon = 1e-6;
/// Fraction of samples discarded at each tail before histogramming.
inline constexpr double kTrimFraction = 0.05;
/// Floor on the reference spread used for the sweep-wide bin width, in
/// log-chromaticity units. Spreads below this are numerical noise.
inline constexpr double kMinBinSigma = 1e-6;
inline constexpr int kMinAngle = 1;
inline constexpr int kMaxAngle = 180;

struct EntropyResult {
  int angle_deg = kMinAngle;
  double entropy = 0.0;                   ///< nats
  std::vector<double> per_angle_entropy;  ///< index i holds angle i+1
  double bin_width = 0.0;                 ///< histogram bin width shared by all angles
};

ChromaticityMap normalize_rgb(const ImageRGB& img);
Rgb normalize_pixel(const Rgb& c) noexcept;

LogChromaMap log_chromaticity(const ChromaticityMap& chroma);

/// Orthonormal basis of the plane orthogonal to (1,1,1):
/// u1 = (1,-1,0)/sqrt(2), u2 = (1,1,-2)/sqrt(6).
Vec2 plane_coords(const Rgb& rho) noexcept;
/// Inverse of plane_coords restricted to the plane (zero (1,1,1) component).
Rgb lift_to_log(const Vec2& chi) noexcept;

Plane2DMap to_plane_2d(const LogChromaMap& logchroma);

/// s = chi1*cos(theta) + chi2*sin(theta). Throws DomainError outside [1,180].
std::vector<double> project_1d(const Plane2DMap& plane, int angle_deg);

/// Histogram entropy with Scott's-rule bin width taken from the samples
/// themselves (central 90% kept, bins anchored at the trimmed minimum).
double shannon_entropy(std::span<const double> samples);

/// Histogram entropy of the central 90% of `samples` with a caller-fixed
/// bin width. A non-positive width returns 0.
double shannon_entropy(std::span<const double> samples, double bin_width);

/// Bin width shared by every angle of the sweep: Scott's rule applied to
/// the smallest principal standard deviation of the plane points (floored
/// at kMinBinSigma), with n the trimmed sample count. Invariant under
/// rotation and translation of the point set.
double sweep_bin_width(const Plane2DMap& plane);

/// Exhaustive sweep over integer angles 1..180; ties go to the smaller angle.
EntropyResult min_entropy_angle(const Plane2DMap& plane);

struct ShadowFreeOptions {
  double brightest_fraction = 0.01;
};

struct ShadowFreeResult {
  ChromaticityMap chroma;
  EntropyResult sweep;
  Vec2 offset{};  ///< illumination-compensation offset added in the plane
};

ShadowFreeResult shadow_free_chromaticity_detailed(const ImageRGB& img,
                                                   const ShadowFreeOptions& options = {});
ChromaticityMap shadow_free_chromaticity(const ImageRGB& img,
                                         const ShadowFreeOptions& options = {});

/// Mean |normalize_rgb(output) - target| over pixels and channels, with the
/// analytic gradient through the normalization (subgradient 0 at kinks).
LossResult chromaticity_loss(const ImageRGB& output, const ChromaticityMap& target);

}  // namespace shadowkit::chroma
