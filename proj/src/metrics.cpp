#include "shadowkit/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "shadowkit/edges.hpp"

namespace shadowkit::metrics {

namespace {

double srgb_to_linear(double c) noexcept {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) noexcept {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

void check_pair(const ImageRGB& pred, const ImageRGB& gt, const char* what) {
  require_same_shape(pred, gt, what);
  pred.validate();
  gt.validate();
}

std::size_t check_region(const ImageRGB& img, const ShadowMask& region, const char* what) {
  require_same_shape(img, region, what);
  region.validate();
  const std::size_t n = region.count();
  if (n == 0) throw DomainError(std::string(what) + ": empty region");
  return n;
}

template <typename Pred>
double lab_mae(const ImageRGB& pred, const ImageRGB& gt, Pred include) {
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!include(i)) continue;
    const Rgb a = rgb_to_lab(pred[i]);
    const Rgb b = rgb_to_lab(gt[i]);
    total += std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]);
    ++n;
  }
  return total / (3.0 * static_cast<double>(n));
}

template <typename Pred>
double psnr_over(const ImageRGB& pred, const ImageRGB& gt, Pred include) {
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!include(i)) continue;
    for (int c = 0; c < 3; ++c) {
      const double d = pred[i][c] - gt[i][c];
      total += d * d;
    }
    n += 3;
  }
  const double mse = total / static_cast<double>(n);
  return mse < kPsnrMinMse ? kPsnrCap : 10.0 * std::log10(1.0 / mse);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

Rgb rgb_to_lab(const Rgb& srgb) noexcept {
  const double r = srgb_to_linear(srgb[0]);
  const double g = srgb_to_linear(srgb[1]);
  const double b = srgb_to_linear(srgb[2]);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / 0.95047);
  const double fy = lab_f(y / 1.0);
  const double fz = lab_f(z / 1.08883);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Grid<Rgb> rgb_to_lab(const ImageRGB& img) {
  img.validate();
  Grid<Rgb> out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = rgb_to_lab(img[i]);
  return out;
}

double rmse_region(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& region) {
  check_pair(pred, gt, "rmse_region");
  check_region(pred, region, "rmse_region");
  return lab_mae(pred, gt, [&](std::size_t i) { return region[i] != 0; });
}

double rmse_region(const ImageRGB& pred, const ImageRGB& gt) {
  check_pair(pred, gt, "rmse_region");
  return lab_mae(pred, gt, [](std::size_t) { return true; });
}

double psnr(const ImageRGB& pred, const ImageRGB& gt) {
  check_pair(pred, gt, "psnr");
  return psnr_over(pred, gt, [](std::size_t) { return true; });
}

double psnr_region(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& region) {
  check_pair(pred, gt, "psnr_region");
  check_region(pred, region, "psnr_region");
  return psnr_over(pred, gt, [&](std::size_t i) { return region[i] != 0; });
}

GrayImage ssim_map(const ImageRGB& pred, const ImageRGB& gt) {
  check_pair(pred, gt, "ssim");
  const int side = 2 * kSsimRadius + 1;
  if (std::min(pred.width(), pred.height()) < side) {
    throw DomainError("ssim: image must be at least 11x11");
  }
  const edges::Kernel window = edges::gaussian_kernel(kSsimSigma);
  const GrayImage a = luminance(pred);
  const GrayImage b = luminance(gt);
  constexpr double c1 = (kSsimK1 * 1.0) * (kSsimK1 * 1.0);
  constexpr double c2 = (kSsimK2 * 1.0) * (kSsimK2 * 1.0);

  GrayImage out(pred.width() - side + 1, pred.height() - side + 1);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
      for (int dy = -kSsimRadius; dy <= kSsimRadius; ++dy) {
        for (int dx = -kSsimRadius; dx <= kSsimRadius; ++dx) {
          const double w = window.at(dx, dy);
          const double va = a(x + kSsimRadius + dx, y + kSsimRadius + dy);
          const double vb = b(x + kSsimRadius + dx, y + kSsimRadius + dy);
          ma += w * va;
          mb += w * vb;
          saa += w * va * va;
          sbb += w * vb * vb;
          sab += w * va * vb;
        }
      }
      const double var_a = saa - ma * ma;
      const double var_b = sbb - mb * mb;
      const double cov = sab - ma * mb;
      out(x, y) = ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                  ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
    }
  }
  return out;
}

double ssim(const ImageRGB& pred, const ImageRGB& gt) {
  const GrayImage map = ssim_map(pred, gt);
  double total = 0.0;
  for (double v : map.pixels()) total += v;
  return total / static_cast<double>(map.size());
}

double ssim_region(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& region) {
  check_region(pred, region, "ssim_region");
  const GrayImage map = ssim_map(pred, gt);
  double total = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (region(x + kSsimRadius, y + kSsimRadius)) {
        total += map(x, y);
        ++n;
      }
    }
  }
  if (n == 0) throw DomainError("ssim_region: no valid window centre inside the region");
  return total / static_cast<double>(n);
}

EvalReport region_report(const ImageRGB& pred, const ImageRGB& gt, const ShadowMask& mask) {
  check_pair(pred, gt, "region_report");
  const ShadowMask outside = mask.complement();
  EvalReport r;
  r.shadow_pixels = check_region(pred, mask, "region_report (shadow)");
  r.non_shadow_pixels = check_region(pred, outside, "region_report (non-shadow)");
  r.shadow = {rmse_region(pred, gt, mask), psnr_region(pred, gt, mask), ssim_region(pred, gt, mask)};
  r.non_shadow = {rmse_region(pred, gt, outside), psnr_region(pred, gt, outside),
                  ssim_region(pred, gt, outside)};
  r.all = {rmse_region(pred, gt), psnr(pred, gt), ssim(pred, gt)};
  return r;
}

std::string EvalReport::to_key_value() const {
  std::ostringstream os;
  os << "rmse_shadow: " << fmt(shadow.rmse) << '\n'
     << "rmse_non_shadow: " << fmt(non_shadow.rmse) << '\n'
     << "rmse_all: " << fmt(all.rmse) << '\n'
     << "ssim_shadow: " << fmt(shadow.ssim) << '\n'
     << "ssim_non_shadow: " << fmt(non_shadow.ssim) << '\n'
     << "ssim_all: " << fmt(all.ssim) << '\n'
     << "psnr_shadow: " << fmt(shadow.psnr) << '\n'
     << "psnr_non_shadow: " << fmt(non_shadow.psnr) << '\n'
     << "psnr_all: " << fmt(all.psnr) << '\n'
     << "pixels_shadow: " << shadow_pixels << '\n'
     << "pixels_non_shadow: " << non_shadow_pixels << '\n';
  return os.str();
}

std::string EvalReport::csv_header() {
  return "rmse_s,rmse_ns,rmse_all,ssim_s,ssim_ns,ssim_all,psnr_s,psnr_ns,psnr_all";
}

std::string EvalReport::to_csv_row() const {
  return fmt(shadow.rmse) + ',' + fmt(non_shadow.rmse) + ',' + fmt(all.rmse) + ',' + fmt(shadow.ssim) +
         ',' + fmt(non_shadow.ssim) + ',' + fmt(all.ssim) + ',' + fmt(shadow.psnr) + ',' +
         fmt(non_shadow.psnr) + ',' + fmt(all.psnr);
}

}  // namespace shadowkit::metrics
