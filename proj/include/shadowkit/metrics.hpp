#pragma once

#include <string>

#include "shadowkit/image.hpp"

namespace shadowkit::metrics {

inline constexpr double kPsnrCap = 99.0;
inline constexpr double kPsnrMinMse = 1e-10;
inline constexpr int kSsimRadius = 5;  // 11x11 window
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

/// sRGB (D65) -> CIE L*a*b*.
Rgb rgb_to_lab(const Rgb& srgb) noexcept;
Grid<Rgb> rgb_to_lab(const ImageRGB& img);

/// Mean absolute LAB difference over region pixels and the three channels.
/// This is the "RMSE" customarily reported for shadow removal.
double rmse_region(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& region);
double rmse_region(const ImageRGB& pred, const ImageRGB& gt);

/// 10 log10(1/MSE) over all pixels and channels; 99 dB when MSE < 1e-10.
double psnr(const ImageRGB& pred, const ImageRGB& gt);
double psnr_region(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& region);

/// Per-window SSIM of luma over valid (fully inside) 11x11 windows. The map
/// is (W-10)x(H-10); entry (x, y) belongs to the window centred on (x+5, y+5).
GrayImage ssim_map(const ImageRGB& pred, const ImageRGB& gt);
double ssim(const ImageRGB& pred, const ImageRGB& gt);
/// Mean of ssim_map entries whose window centre lies in `region`.
double ssim_region(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& region);

struct RegionScores {
  double rmse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

struct EvalReport {
  RegionScores shadow;
  RegionScores non_shadow;
  RegionScores all;  ///< computed over all pixels, not averaged from the regions
  std::size_t shadow_pixels = 0;
  std::size_t non_shadow_pixels = 0;

  std::size_t total_pixels() const noexcept { return shadow_pixels + non_shadow_pixels; }
  /// "key: value" lines.
  std::string to_key_value() const;
  /// rmse_s,rmse_ns,rmse_all,ssim_s,ssim_ns,ssim_all,psnr_s,psnr_ns,psnr_all
  std::string to_csv_row() const;
  static std::string csv_header();
};

EvalReport region_report(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& mask);

}  // namespace shadowkit::metrics
