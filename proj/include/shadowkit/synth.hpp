#pragma once

#include <cstdint>
#include <span>

#include "shadowkit/data_io.hpp"
#include "shadowkit/fusion.hpp"

namespace shadowkit::synth {

/// 64-bit linear congruential generator (Knuth MMIX constants). Output is
/// the top 53 bits of the state, so sequences are identical on every platform.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) noexcept;
  std::uint64_t next() noexcept;
  /// Uniform in [0,1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct SynthParams {
  std::uint64_t base_seed = 1;
  int image_size = 128;
  int polygon_vertices = 6;
  double attenuation = 0.5;
  double penumbra_sigma = 0.0;
  Vec2 chroma_shift{0.0, 0.0};  ///< offset in the log-chromaticity plane

  void validate() const;
};

/// Amplitude of the base image's chromaticity noise in the log-chromaticity
/// plane. Kept small relative to the chroma shifts the generator injects so
/// the shift direction dominates the chromaticity distribution.
inline constexpr double kBaseChromaNoise = 0.015;

/// Shadow-free base image only.
ImageRGB synthesize_base(const SynthParams& params);

/// Seeded convex polygon rasterized at pixel centers.
ShadowMask synthesize_mask(const SynthParams& params);

/// Shadow weight in [0,1] per pixel: the polygon indicator blurred with
/// penumbra_sigma (exactly binary when penumbra_sigma == 0).
GrayImage shadow_field(const SynthParams& params);

/// free_img = base; shadow_img = base * (1 - (1-a) m) * exp(lift(shift) * m),
/// m = shadow_field; clamped to [0,1]. Pure function of `params`.
io::Triplet synthesize_triplet(const SynthParams& params);

/// Fits the softness proxy against synthesized scenes: g0 is the midpoint of
/// the mean boundary gradient averaged over hard (sigma 0) and soft
/// (sigma 8) versions of each seed. The logistic scale is returned unchanged.
fusion::SoftnessProxy calibrate_softness_proxy(std::span<const std::uint64_t> seeds,
                                               double attenuation = 0.4, double scale = 0.05,
                                               int image_size = 128);

}  // namespace shadowkit::synth
