#include "shadowkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "shadowkit/chroma.hpp"
#include "shadowkit/edges.hpp"

namespace shadowkit::synth {

Lcg64::Lcg64(std::uint64_t seed) noexcept : state_(seed ^ 0x9E3779B97F4A7C15ULL) { next(); }

std::uint64_t Lcg64::next() noexcept {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

double Lcg64::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

void SynthParams::validate() const {
  if (image_size < 8) throw DomainError("synth: image_size must be at least 8");
  if (polygon_vertices < 3) throw DomainError("synth: polygon needs at least 3 vertices");
  if (!(attenuation > 0.0 && attenuation < 1.0)) throw DomainError("synth: attenuation must be in (0,1)");
  if (!(penumbra_sigma >= 0.0) || !std::isfinite(penumbra_sigma)) {
    throw DomainError("synth: penumbra_sigma must be >= 0");
  }
  if (!std::isfinite(chroma_shift[0]) || !std::isfinite(chroma_shift[1])) {
    throw DomainError("synth: chroma_shift must be finite");
  }
}

namespace {

// Smoothstep-interpolated value noise on a (cells+1)^2 lattice, values in [0,1].
class ValueNoise {
 public:
  ValueNoise(Lcg64& rng, int cells) : cells_(cells) {
    lattice_.resize(static_cast<std::size_t>((cells + 1) * (cells + 1)));
    for (double& v : lattice_) v = rng.uniform();
  }

  double sample(int x, int y, int size) const {
    auto locate = [&](int p, int& i, double& t) {
      const double u = (p + 0.5) * cells_ / size;
      i = std::min(static_cast<int>(u), cells_ - 1);
      t = u - i;
      t = t * t * (3.0 - 2.0 * t);
    };
    int ix, iy;
    double tx, ty;
    locate(x, ix, tx);
    locate(y, iy, ty);
    const double top = at(ix, iy) * (1.0 - tx) + at(ix + 1, iy) * tx;
    const double bottom = at(ix, iy + 1) * (1.0 - tx) + at(ix + 1, iy + 1) * tx;
    return top * (1.0 - ty) + bottom * ty;
  }

 private:
  double at(int i, int j) const { return lattice_[static_cast<std::size_t>(j * (cells_ + 1) + i)]; }

  int cells_;
  std::vector<double> lattice_;
};

struct Point {
  double x, y;
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain. Consecutive hull vertices turn with cross() > 0.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

struct Scene {
  ImageRGB base;
  ShadowMask mask;
};

// All random draws happen here, in a fixed order.
Scene build_scene(const SynthParams& p) {
  p.validate();
  const int n = p.image_size;
  Lcg64 rng(p.base_seed);

  const Rgb color{rng.uniform(0.7, 1.0), rng.uniform(0.7, 1.0), rng.uniform(0.7, 1.0)};
  const ValueNoise intensity(rng, 4);
  const ValueNoise hue_a(rng, 8);
  const ValueNoise hue_b(rng, 8);

  ImageRGB base(n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double level = 0.45 + 0.3 * intensity.sample(x, y, n);
      const Vec2 chi{kBaseChromaNoise * (hue_a.sample(x, y, n) - 0.5),
                     kBaseChromaNoise * (hue_b.sample(x, y, n) - 0.5)};
      const Rgb rho = chroma::lift_to_log(chi);
      for (int c = 0; c < 3; ++c) base(x, y)[c] = std::clamp(level * color[c] * std::exp(rho[c]), 0.0, 1.0);
    }
  }

  const double cx = n * (0.5 + rng.uniform(-0.1, 0.1));
  const double cy = n * (0.5 + rng.uniform(-0.1, 0.1));
  const double rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::vector<Point> vertices;
  for (int i = 0; i < p.polygon_vertices; ++i) {
    const double angle = (i + rng.uniform(-0.3, 0.3)) * 2.0 * std::numbers::pi / p.polygon_vertices + rotation;
    const double radius = n * rng.uniform(0.28, 0.38);
    vertices.push_back({cx + radius * std::cos(angle), cy + radius * std::sin(angle)});
  }
  const std::vector<Point> hull = convex_hull(vertices);

  ShadowMask mask(n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const Point c{x + 0.5, y + 0.5};
      bool inside = true;
      for (std::size_t i = 0; i < hull.size() && inside; ++i) {
        inside = cross(hull[i], hull[(i + 1) % hull.size()], c) >= 0.0;
      }
      mask(x, y) = inside ? 1 : 0;
    }
  }
  return {std::move(base), std::move(mask)};
}

GrayImage field_from_mask(const ShadowMask& mask, double sigma) {
  GrayImage field(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) field[i] = mask[i];
  if (sigma > 0.0) field = edges::convolve(field, edges::gaussian_kernel(sigma));
  return field;
}

}  // namespace

ImageRGB synthesize_base(const SynthParams& params) { return build_scene(params).base; }

ShadowMask synthesize_mask(const SynthParams& params) { return build_scene(params).mask; }

GrayImage shadow_field(const SynthParams& params) {
  return field_from_mask(build_scene(params).mask, params.penumbra_sigma);
}

io::Triplet synthesize_triplet(const SynthParams& params) {
  Scene scene = build_scene(params);
  const GrayImage field = field_from_mask(scene.mask, params.penumbra_sigma);
  const Rgb shift = chroma::lift_to_log(params.chroma_shift);

  ImageRGB shadow(scene.base.width(), scene.base.height());
  for (std::size_t i = 0; i < shadow.size(); ++i) {
    const double m = field[i];
    const double gray = 1.0 - (1.0 - params.attenuation) * m;
    for (int c = 0; c < 3; ++c) {
      shadow[i][c] = std::clamp(scene.base[i][c] * gray * std::exp(shift[c] * m), 0.0, 1.0);
    }
  }
  return {std::move(shadow), std::move(scene.mask), std::move(scene.base),
          "synth_" + std::to_string(params.base_seed)};
}

fusion::SoftnessProxy calibrate_softness_proxy(std::span<const std::uint64_t> seeds,
                                               double attenuation, double scale, int image_size) {
  if (seeds.empty()) throw DomainError("calibrate_softness_proxy: no seeds");
  double hard = 0.0;
  double soft = 0.0;
  for (std::uint64_t seed : seeds) {
    SynthParams p;
    p.base_seed = seed;
    p.image_size = image_size;
    p.attenuation = attenuation;
    p.penumbra_sigma = 0.0;
    const io::Triplet h = synthesize_triplet(p);
    hard += fusion::mean_boundary_gradient(h.shadow_img, h.mask);
    p.penumbra_sigma = 8.0;
    const io::Triplet s = synthesize_triplet(p);
    soft += fusion::mean_boundary_gradient(s.shadow_img, s.mask);
  }
  const double count = static_cast<double>(seeds.size());
  return {0.5 * (hard / count + soft / count), scale};
}

}  // namespace shadowkit::synth
