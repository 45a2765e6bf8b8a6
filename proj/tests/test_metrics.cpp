#include <doctest.h>

#include <cmath>

#include "metrics_oracle.hpp"
#include "shadowkit/metrics.hpp"
#include "shadowkit/synth.hpp"
#include "support.hpp"

using namespace shadowkit;
using namespace shadowkit::metrics;
using testing::Lcg64;

TEST_CASE("LAB conversion") {
  const Rgb white = rgb_to_lab({1, 1, 1});
  CHECK(std::abs(white[0] - 100.0) < 0.01);
  CHECK(std::abs(white[1]) < 0.01);
  CHECK(std::abs(white[2]) < 0.01);
  const Rgb black = rgb_to_lab({0, 0, 0});
  for (double v : black) CHECK(std::abs(v) < 0.01);
  const Rgb gray = rgb_to_lab({0.5, 0.5, 0.5});
  const Rgb ref = testing::oracle::lab({0.5, 0.5, 0.5});
  for (int c = 0; c < 3; ++c) CHECK(std::abs(gray[c] - ref[c]) < 1e-6);
  CHECK(gray[0] == doctest::Approx(53.389).epsilon(1e-4));

  Lcg64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Rgb p{rng.uniform(), rng.uniform(), rng.uniform()};
    const Rgb a = rgb_to_lab(p);
    const Rgb b = testing::oracle::lab(p);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - b[c]) < 1e-9);
  }
}

TEST_CASE("rmse examples") {
  Lcg64 rng(2);
  const ImageRGB a = testing::random_image(rng, 12, 12);
  CHECK(rmse_region(a, a) == 0.0);

  // Two grays whose L* differ by exactly 3 (a*, b* stay 0).
  const double l0 = 50.0;
  auto gray_for_l = [](double L) {
    const double fy = (L + 16.0) / 116.0;
    const double Y = fy > 6.0 / 29.0 ? fy * fy * fy : 3 * (6.0 / 29.0) * (6.0 / 29.0) * (fy - 4.0 / 29.0);
    return Y <= 0.0031308 ? 12.92 * Y : 1.055 * std::pow(Y, 1 / 2.4) - 0.055;
  };
  ImageRGB p(3, 3, Rgb{0.5, 0.5, 0.5});
  ImageRGB q = p;
  const double g0 = gray_for_l(l0), g1 = gray_for_l(l0 + 3.0);
  p(1, 1) = {g0, g0, g0};
  q(1, 1) = {g1, g1, g1};
  ShadowMask one(3, 3);
  one(1, 1) = 1;
  // a*, b* of a neutral gray are zero only up to the white-point rounding.
  CHECK(rmse_region(p, q, one) == doctest::Approx(1.0).epsilon(1e-3));

  for (int t = 0; t < 5; ++t) {
    const ImageRGB x = testing::random_image(rng, 9, 7);
    const ImageRGB y = testing::random_image(rng, 9, 7);
    const ShadowMask m = testing::random_mask(rng, 9, 7);
    CHECK(std::abs(rmse_region(x, y, m) - testing::oracle::lab_mae(x, y, &m)) < 1e-9);
    CHECK(std::abs(rmse_region(x, y) - testing::oracle::lab_mae(x, y, nullptr)) < 1e-9);
    CHECK(rmse_region(x, y) == rmse_region(y, x));
  }
  CHECK_THROWS_AS(rmse_region(a, a, ShadowMask(12, 12)), DomainError);
  CHECK_THROWS_AS(rmse_region(a, ImageRGB(3, 3)), DomainError);
}

TEST_CASE("psnr examples") {
  Lcg64 rng(3);
  const ImageRGB a = testing::random_image(rng, 8, 8);
  CHECK(psnr(a, a) == 99.0);

  const ImageRGB lo(8, 8, Rgb{0.2, 0.2, 0.2});
  const ImageRGB hi(8, 8, Rgb{0.3, 0.3, 0.3});
  CHECK(std::abs(psnr(lo, hi) - 20.0) < 1e-9);

  for (int t = 0; t < 5; ++t) {
    const ImageRGB x = testing::random_image(rng, 8, 8);
    const ImageRGB y = testing::random_image(rng, 8, 8);
    CHECK(std::abs(psnr(x, y) - testing::oracle::psnr(x, y, nullptr)) < 1e-9);
    CHECK(psnr(x, y) == psnr(y, x));
    const ShadowMask m = testing::random_mask(rng, 8, 8);
    CHECK(std::abs(psnr_region(x, y, m) - testing::oracle::psnr(x, y, &m)) < 1e-9);
  }
}

TEST_CASE("ssim examples") {
  Lcg64 rng(4);
  const ImageRGB a = testing::random_image(rng, 24, 20);
  CHECK(std::abs(ssim(a, a) - 1.0) < 1e-9);

  ImageRGB checker(24, 24);
  ImageRGB inverse(24, 24);
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 24; ++x) {
      const double v = ((x / 2 + y / 2) % 2) ? 1.0 : 0.0;
      checker(x, y) = {v, v, v};
      inverse(x, y) = {1 - v, 1 - v, 1 - v};
    }
  CHECK(ssim(inverse, checker) < 0.5);

  for (int t = 0; t < 5; ++t) {
    const ImageRGB x = testing::random_image(rng, 20, 17);
    const ImageRGB y = testing::random_image(rng, 20, 17);
    const double s = ssim(x, y);
    CHECK(std::abs(s - testing::oracle::ssim(x, y, nullptr)) < 1e-7);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    const ShadowMask m = testing::rect_mask(20, 17, 3, 4, 12, 13);
    CHECK(std::abs(ssim_region(x, y, m) - testing::oracle::ssim(x, y, &m)) < 1e-7);
  }

  const GrayImage map = ssim_map(a, a);
  CHECK(map.width() == 14);
  CHECK(map.height() == 10);
  CHECK_THROWS_AS(ssim(ImageRGB(10, 30), ImageRGB(10, 30)), DomainError);
  // only border pixels selected: no valid window centre inside
  CHECK_THROWS_AS(ssim_region(a, a, testing::rect_mask(24, 20, 0, 0, 2, 20)), DomainError);
}

TEST_CASE("region report") {
  Lcg64 rng(5);
  const ImageRGB gt = testing::random_image(rng, 32, 32);
  const ShadowMask mask = testing::rect_mask(32, 32, 8, 8, 24, 24);
  const EvalReport same = region_report(gt, gt, mask);
  for (const RegionScores* r : {&same.shadow, &same.non_shadow, &same.all}) {
    CHECK(r->rmse == 0.0);
    CHECK(r->psnr == 99.0);
    CHECK(r->ssim == 1.0);
  }
  CHECK(same.total_pixels() == 1024);
  CHECK(same.shadow_pixels == 256);

  ImageRGB pred = gt;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (mask[i]) pred[i] = {0.5, 0.5, 0.5};
  const EvalReport r = region_report(pred, gt, mask);
  CHECK(r.non_shadow.rmse == 0.0);
  CHECK(r.all.rmse > 0.0);
  CHECK(r.all.rmse < r.shadow.rmse);

  CHECK_THROWS_AS(region_report(gt, gt, ShadowMask(32, 32)), DomainError);
  CHECK_THROWS_AS(region_report(gt, gt, ShadowMask(32, 32, 1)), DomainError);
}

TEST_CASE("region report on a synthetic triplet matches brute force") {
  synth::SynthParams p;
  p.base_seed = 9;
  p.image_size = 48;
  const io::Triplet t = synth::synthesize_triplet(p);
  const EvalReport r = region_report(t.shadow_img, t.free_img, t.mask);
  const ShadowMask out = t.mask.complement();
  using namespace testing::oracle;
  CHECK(std::abs(r.shadow.rmse - lab_mae(t.shadow_img, t.free_img, &t.mask)) < 1e-7);
  CHECK(std::abs(r.non_shadow.rmse - lab_mae(t.shadow_img, t.free_img, &out)) < 1e-7);
  CHECK(std::abs(r.all.rmse - lab_mae(t.shadow_img, t.free_img, nullptr)) < 1e-7);
  CHECK(std::abs(r.shadow.psnr - psnr(t.shadow_img, t.free_img, &t.mask)) < 1e-7);
  CHECK(std::abs(r.non_shadow.psnr - psnr(t.shadow_img, t.free_img, &out)) < 1e-7);
  CHECK(std::abs(r.all.psnr - psnr(t.shadow_img, t.free_img, nullptr)) < 1e-7);
  CHECK(std::abs(r.shadow.ssim - ssim(t.shadow_img, t.free_img, &t.mask)) < 1e-7);
  CHECK(std::abs(r.non_shadow.ssim - ssim(t.shadow_img, t.free_img, &out)) < 1e-7);
  CHECK(std::abs(r.all.ssim - ssim(t.shadow_img, t.free_img, nullptr)) < 1e-7);
}

TEST_CASE("all-region rmse lies between the region values") {
  Lcg64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const ImageRGB a = testing::random_image(rng, 16, 16);
    const ImageRGB b = testing::random_image(rng, 16, 16);
    ShadowMask m = testing::random_mask(rng, 16, 16, rng.uniform(0.1, 0.9));
    m(8, 8) = 1;
    m(0, 0) = 0;
    const double s = rmse_region(a, b, m);
    const double ns = rmse_region(a, b, m.complement());
    const double all = rmse_region(a, b);
    CHECK(all >= std::min(s, ns) - 1e-12);
    CHECK(all <= std::max(s, ns) + 1e-12);
  }
}

TEST_CASE("report serialization") {
  EvalReport r;
  r.shadow = {1.5, 30.0, 0.9};
  r.non_shadow = {0.5, 40.0, 0.95};
  r.all = {0.75, 35.0, 0.93};
  r.shadow_pixels = 10;
  r.non_shadow_pixels = 30;
  CHECK(EvalReport::csv_header() == "rmse_s,rmse_ns,rmse_all,ssim_s,ssim_ns,ssim_all,psnr_s,psnr_ns,psnr_all");
  CHECK(r.to_csv_row() ==
        "1.500000,0.500000,0.750000,0.900000,0.950000,0.930000,30.000000,40.000000,35.000000");
  const std::string kv = r.to_key_value();
  CHECK(kv.find("rmse_shadow: 1.500000\n") != std::string::npos);
  CHECK(kv.find("psnr_all: 35.000000\n") != std::string::npos);
  CHECK(kv.find("pixels_non_shadow: 30\n") != std::string::npos);
}
