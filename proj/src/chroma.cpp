#include "shadowkit/chroma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace shadowkit::chroma {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);

// cos/sin of an integer angle, exact at the axis-aligned angles.
Vec2 unit_direction(int angle_deg) {
  switch (angle_deg) {
    case 90: return {0.0, 1.0};
    case 180: return {-1.0, 0.0};
    default: {
      const double t = angle_deg * std::numbers::pi / 180.0;
      return {std::cos(t), std::sin(t)};
    }
  }
}

std::size_t trim_count(std::size_t n) {
  return static_cast<std::size_t>(std::floor(kTrimFraction * static_cast<double>(n)));
}

// Entropy of the histogram of a sorted range whose bins start at the first
// element. Counting runs of equal bin index avoids materializing bins.
double sorted_histogram_entropy(std::span<const double> sorted, double bin_width) {
  const double n = static_cast<double>(sorted.size());
  const double origin = sorted.front();
  double entropy = 0.0;
  std::size_t run_start = 0;
  double run_bin = 0.0;
  for (std::size_t i = 0; i <= sorted.size(); ++i) {
    const double bin = i < sorted.size() ? std::floor((sorted[i] - origin) / bin_width) : -1.0;
    if (i == sorted.size() || bin != run_bin) {
      if (i > run_start) {
        const double p = static_cast<double>(i - run_start) / n;
        entropy -= p * std::log(p);
      }
      run_start = i;
      run_bin = bin;
    }
  }
  return entropy;
}

std::vector<double> trimmed_sorted(std::span<const double> samples) {
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const std::size_t cut = trim_count(v.size());
  return {v.begin() + static_cast<std::ptrdiff_t>(cut), v.end() - static_cast<std::ptrdiff_t>(cut)};
}

}  // namespace

Rgb normalize_pixel(const Rgb& c) noexcept {
  const double denom = c[0] + c[1] + c[2] + 3.0 * kEpsilon;
  return {(c[0] + kEpsilon) / denom, (c[1] + kEpsilon) / denom, (c[2] + kEpsilon) / denom};
}

ChromaticityMap normalize_rgb(const ImageRGB& img) {
  img.validate();
  ChromaticityMap out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = normalize_pixel(img[i]);
  return out;
}

LogChromaMap log_chromaticity(const ChromaticityMap& chroma) {
  LogChromaMap out(chroma.width(), chroma.height());
  for (std::size_t i = 0; i < chroma.size(); ++i) {
    const Rgb& c = chroma[i];
    out[i] = {std::log(c[0]), std::log(c[1]), std::log(c[2])};
  }
  return out;
}

Vec2 plane_coords(const Rgb& rho) noexcept {
  return {kInvSqrt2 * (rho[0] - rho[1]), kInvSqrt6 * (rho[0] + rho[1] - 2.0 * rho[2])};
}

Rgb lift_to_log(const Vec2& chi) noexcept {
  return {kInvSqrt2 * chi[0] + kInvSqrt6 * chi[1], -kInvSqrt2 * chi[0] + kInvSqrt6 * chi[1],
          -2.0 * kInvSqrt6 * chi[1]};
}

Plane2DMap to_plane_2d(const LogChromaMap& logchroma) {
  Plane2DMap out(logchroma.width(), logchroma.height());
  for (std::size_t i = 0; i < logchroma.size(); ++i) out[i] = plane_coords(logchroma[i]);
  return out;
}

std::vector<double> project_1d(const Plane2DMap& plane, int angle_deg) {
  if (angle_deg < kMinAngle || angle_deg > kMaxAngle) {
    throw DomainError("projection angle must be in [1,180], got " + std::to_string(angle_deg));
  }
  const Vec2 dir = unit_direction(angle_deg);
  std::vector<double> s(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) {
    s[i] = plane[i][0] * dir[0] + plane[i][1] * dir[1];
  }
  return s;
}

double shannon_entropy(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("shannon_entropy: empty sample set");
  const std::vector<double> kept = trimmed_sorted(samples);
  const double n = static_cast<double>(kept.size());
  const double mean = std::accumulate(kept.begin(), kept.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : kept) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) return 0.0;
  return sorted_histogram_entropy(kept, 3.5 * sigma * std::cbrt(1.0 / n));
}

double shannon_entropy(std::span<const double> samples, double bin_width) {
  if (samples.empty()) throw DomainError("shannon_entropy: empty sample set");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) return 0.0;
  return sorted_histogram_entropy(trimmed_sorted(samples), bin_width);
}

double sweep_bin_width(const Plane2DMap& plane) {
  const double n = static_cast<double>(plane.size());
  Vec2 mean{0.0, 0.0};
  for (const Vec2& p : plane.pixels()) {
    mean[0] += p[0];
    mean[1] += p[1];
  }
  mean[0] /= n;
  mean[1] /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const Vec2& p : plane.pixels()) {
    const double dx = p[0] - mean[0];
    const double dy = p[1] - mean[1];
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= n;
  syy /= n;
  sxy /= n;
  const double half_trace = 0.5 * (sxx + syy);
  const double radius = std::hypot(0.5 * (sxx - syy), sxy);
  const double sigma_min = std::sqrt(std::max(half_trace - radius, 0.0));
  const double kept = n - 2.0 * static_cast<double>(trim_count(plane.size()));
  return 3.5 * std::max(sigma_min, kMinBinSigma) * std::cbrt(1.0 / kept);
}

EntropyResult min_entropy_angle(const Plane2DMap& plane) {
  if (plane.size() < 2) throw DomainError("min_entropy_angle: need at least 2 pixels");
  EntropyResult result;
  result.bin_width = sweep_bin_width(plane);
  result.per_angle_entropy.reserve(kMaxAngle);
  for (int angle = kMinAngle; angle <= kMaxAngle; ++angle) {
    const double h = shannon_entropy(project_1d(plane, angle), result.bin_width);
    result.per_angle_entropy.push_back(h);
    if (angle == kMinAngle || h < result.entropy) {
      result.entropy = h;
      result.angle_deg = angle;
    }
  }
  return result;
}

ShadowFreeResult shadow_free_chromaticity_detailed(const ImageRGB& img,
                                                   const ShadowFreeOptions& options) {
  if (!(options.brightest_fraction > 0.0 && options.brightest_fraction <= 1.0)) {
    throw DomainError("brightest_fraction must be in (0,1]");
  }
  const ChromaticityMap chroma = normalize_rgb(img);
  const Plane2DMap plane = to_plane_2d(log_chromaticity(chroma));

  ShadowFreeResult result{ChromaticityMap(img.width(), img.height()), min_entropy_angle(plane), {}};
  const Vec2 dir = unit_direction(result.sweep.angle_deg);
  auto project = [&dir](const Vec2& p) {
    const double s = p[0] * dir[0] + p[1] * dir[1];
    return Vec2{s * dir[0], s * dir[1]};
  };

  // Brightest pixels by channel sum; ties resolved by pixel order.
  const std::size_t n = img.size();
  const std::size_t bright = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(options.brightest_fraction * static_cast<double>(n))));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto sum = [&img](std::size_t i) { return img[i][0] + img[i][1] + img[i][2]; };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(bright), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double sa = sum(a), sb = sum(b);
                      return sa > sb || (sa == sb && a < b);
                    });
  for (std::size_t k = 0; k < bright; ++k) {
    const Vec2& p = plane[order[k]];
    const Vec2 q = project(p);
    result.offset[0] += p[0] - q[0];
    result.offset[1] += p[1] - q[1];
  }
  result.offset[0] /= static_cast<double>(bright);
  result.offset[1] /= static_cast<double>(bright);

  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 q = project(plane[i]);
    const Rgb rho = lift_to_log({q[0] + result.offset[0], q[1] + result.offset[1]});
    const Rgb e{std::exp(rho[0]), std::exp(rho[1]), std::exp(rho[2])};
    const double total = e[0] + e[1] + e[2];
    result.chroma[i] = {e[0] / total, e[1] / total, e[2] / total};
  }
  return result;
}

ChromaticityMap shadow_free_chromaticity(const ImageRGB& img, const ShadowFreeOptions& options) {
  return shadow_free_chromaticity_detailed(img, options).chroma;
}

LossResult chromaticity_loss(const ImageRGB& output, const ChromaticityMap& target) {
  require_same_shape(output, target, "chromaticity_loss");
  output.validate();
  LossResult result{0.0, Grid<Rgb>(output.width(), output.height())};
  const double scale = 1.0 / (3.0 * static_cast<double>(output.size()));
  for (std::size_t i = 0; i < output.size(); ++i) {
    const Rgb& x = output[i];
    const Rgb c = normalize_pixel(x);
    const double denom = x[0] + x[1] + x[2] + 3.0 * kEpsilon;
    Rgb sign{};
    for (int k = 0; k < 3; ++k) {
      const double r = c[k] - target[i][k];
      result.loss += std::abs(r);
      sign[k] = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    }
    // d c_k / d x_j = (delta_kj - c_k) / denom
    const double weighted = sign[0] * c[0] + sign[1] * c[1] + sign[2] * c[2];
    for (int j = 0; j < 3; ++j) {
      result.gradient[i][j] = scale * (sign[j] - weighted) / denom;
    }
  }
  result.loss *= scale;
  return result;
}

}  // namespace shadowkit::chroma
