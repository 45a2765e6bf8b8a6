#include "shadowkit/edges.hpp"

#include <cmath>
#include <string>

namespace shadowkit::edges {

Kernel gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("gaussian_kernel: sigma must be positive, got " + std::to_string(sigma));
  }
  Kernel k;
  k.radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int side = k.side();
  k.weights.resize(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
  const double denom = 2.0 * sigma * sigma;
  double total = 0.0;
  for (int dy = -k.radius; dy <= k.radius; ++dy) {
    for (int dx = -k.radius; dx <= k.radius; ++dx) {
      const double w = std::exp(-static_cast<double>(dx * dx + dy * dy) / denom);
      k.weights[static_cast<std::size_t>((dy + k.radius) * side + (dx + k.radius))] = w;
      total += w;
    }
  }
  for (double& w : k.weights) w /= total;
  return k;
}

int reflect101(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

GrayImage convolve(const GrayImage& img, const Kernel& kernel) {
  const int w = img.width();
  const int h = img.height();
  const int r = kernel.radius;
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = reflect101(y + dy, h);
        for (int dx = -r; dx <= r; ++dx) {
          acc += kernel.at(dx, dy) * img(reflect101(x + dx, w), yy);
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

GrayImage sobel_magnitude(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int ym = reflect101(y - 1, h);
    const int yp = reflect101(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = reflect101(x - 1, w);
      const int xp = reflect101(x + 1, w);
      const double gx = (img(xp, ym) + 2.0 * img(xp, y) + img(xp, yp)) -
                        (img(xm, ym) + 2.0 * img(xm, y) + img(xm, yp));
      const double gy = (img(xm, yp) + 2.0 * img(x, yp) + img(xp, yp)) -
                        (img(xm, ym) + 2.0 * img(x, ym) + img(xp, ym));
      out(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

GrayImage sobel_magnitude(const ShadowMask& mask) {
  mask.validate();
  GrayImage g(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i];
  return sobel_magnitude(g);
}

ShadowMask boundary_pixels(const ShadowMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  ShadowMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto v = mask(x, y);
      const bool edge = (x > 0 && mask(x - 1, y) != v) || (x + 1 < w && mask(x + 1, y) != v) ||
                        (y > 0 && mask(x, y - 1) != v) || (y + 1 < h && mask(x, y + 1) != v);
      out(x, y) = edge ? 1 : 0;
    }
  }
  return out;
}

EdgeMask edge_mask(const ShadowMask& mask, double sigma) {
  const Kernel kernel = gaussian_kernel(sigma);
  const GrayImage response = convolve(sobel_magnitude(mask), kernel);
  EdgeMask out(mask.width(), mask.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = response[i] > kEdgeThreshold ? 1 : 0;
  return out;
}

LossResult edge_loss(const ImageRGB& gt, const ImageRGB& out, const EdgeMask& edge) {
  require_same_shape(gt, out, "edge_loss");
  require_same_shape(gt, edge, "edge_loss");
  LossResult result{0.0, Grid<Rgb>(out.width(), out.height())};
  constexpr double eps2 = kNormEpsilon * kNormEpsilon;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!edge[i]) continue;
    const Rgb d{out[i][0] - gt[i][0], out[i][1] - gt[i][1], out[i][2] - gt[i][2]};
    const double norm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + eps2);
    result.loss += norm;
    for (int c = 0; c < 3; ++c) result.gradient[i][c] = d[c] / norm;
  }
  return result;
}

}  // namespace shadowkit::edges
