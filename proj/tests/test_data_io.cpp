#include <doctest.h>

#include <fstream>

#include "shadowkit/data_io.hpp"
#include "shadowkit/synth.hpp"
#include "support.hpp"

using namespace shadowkit;
using namespace shadowkit::io;
using testing::Lcg64;
using testing::TempDir;

namespace {

Triplet small_triplet(std::uint64_t seed, int size = 16) {
  synth::SynthParams p;
  p.base_seed = seed;
  p.image_size = size;
  Triplet t = synth::synthesize_triplet(p);
  // quantize so the PNG round trip is exact
  for (ImageRGB* img : {&t.shadow_img, &t.free_img})
    for (Rgb& px : img->pixels())
      for (double& v : px) v = to_byte(v) / 255.0;
  return t;
}

}  // namespace

TEST_CASE("byte conversion rounds half to even") {
  CHECK(to_byte(0.0) == 0);
  CHECK(to_byte(1.0) == 255);
  CHECK(to_byte(-0.5) == 0);
  CHECK(to_byte(2.0) == 255);
  CHECK(to_byte(0.5 / 255.0) == 0);
  CHECK(to_byte(1.5 / 255.0) == 2);
  CHECK(to_byte(2.5 / 255.0) == 2);
  for (int v = 0; v < 256; ++v) CHECK(to_byte(v / 255.0) == v);
}

TEST_CASE("PNG round trips") {
  TempDir dir("png");
  Lcg64 rng(1);
  const ImageRGB img = testing::byte_image(rng, 13, 7);
  write_png_rgb(dir / "sub/rgb.png", img);
  CHECK(read_png_rgb(dir / "sub/rgb.png") == img);

  GrayImage g(5, 4);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i * 13 % 256) / 255.0;
  write_png_gray(dir / "gray.png", g);
  CHECK(read_png_gray(dir / "gray.png") == g);

  const ShadowMask m = testing::random_mask(rng, 9, 9);
  write_png_mask(dir / "mask.png", m);
  CHECK(read_png_mask(dir / "mask.png") == m);
}

TEST_CASE("mask threshold is 128") {
  TempDir dir("thr");
  GrayImage g(3, 1);
  g[0] = 127 / 255.0;
  g[1] = 128 / 255.0;
  g[2] = 130 / 255.0;
  write_png_gray(dir / "m.png", g);
  const ShadowMask m = read_png_mask(dir / "m.png");
  CHECK(m[0] == 0);
  CHECK(m[1] == 1);
  CHECK(m[2] == 1);
}

TEST_CASE("PNG errors are I/O errors") {
  TempDir dir("err");
  CHECK_THROWS_AS(read_png_rgb(dir / "missing.png"), IoError);
  std::ofstream(dir / "junk.png") << "not a png";
  CHECK_THROWS_AS(read_png_rgb(dir / "junk.png"), IoError);
  CHECK_THROWS_AS(read_png_mask(dir / "junk.png"), IoError);
}

TEST_CASE("triplet validation") {
  Triplet t = small_triplet(1);
  CHECK_NOTHROW(t.validate());
  t.mask = ShadowMask(4, 4);
  CHECK_THROWS_AS(t.validate(), DomainError);
}

TEST_CASE("istd layout loading") {
  TempDir dir("istd");
  std::vector<Triplet> ts{small_triplet(3), small_triplet(1), small_triplet(2)};
  save_triplets(ts, dir.path());
  LoadResult r = load_triplets(dir.path(), Layout::istd);
  REQUIRE(r.triplets.size() == 3);
  CHECK(r.report.empty());
  CHECK(r.triplets[0].id == "synth_1");
  CHECK(r.triplets[1].id == "synth_2");
  CHECK(r.triplets[2].id == "synth_3");
  CHECK(r.triplets[0] == ts[1]);

  std::filesystem::remove(dir / "B/synth_2.png");
  r = load_triplets(dir.path(), Layout::istd);
  CHECK(r.triplets.size() == 2);
  REQUIRE(r.report.size() == 1);
  CHECK(r.report[0].id == "synth_2");
  CHECK(r.report[0].message.find("mask") != std::string::npos);

  CHECK_THROWS_AS(load_triplets(dir / "nope", Layout::istd), IoError);
}

TEST_CASE("pairs layout loading") {
  TempDir dir("pairs");
  for (std::uint64_t s : {5u, 4u}) {
    const Triplet t = small_triplet(s);
    write_png_rgb(dir / (t.id + "_shadow.png"), t.shadow_img);
    write_png_mask(dir / (t.id + "_mask.png"), t.mask);
    write_png_rgb(dir / (t.id + "_free.png"), t.free_img);
  }
  write_png_rgb(dir / "lonely_shadow.png", small_triplet(6).shadow_img);
  const LoadResult r = load_triplets(dir.path(), Layout::pairs);
  REQUIRE(r.triplets.size() == 2);
  CHECK(r.triplets[0].id == "synth_4");
  CHECK(r.triplets[1] == small_triplet(5));
  REQUIRE(r.report.size() == 1);
  CHECK(r.report[0].id == "lonely");
}

TEST_CASE("manifest round trip") {
  TempDir dir("manifest");
  write_manifest({}, dir / "empty.txt");
  CHECK(read_manifest(dir / "empty.txt").empty());

  const std::vector<TripletRef> refs{{"a", "A/a.png", "B/a.png", "C/a.png", 16, 16},
                                     {"b b", "A/b b.png", "B/b.png", "C/b.png", 8, 12}};
  write_manifest(refs, dir / "m.txt");
  CHECK(read_manifest(dir / "m.txt") == refs);

  CHECK_THROWS_AS(write_manifest({{"x\ty", "a", "b", "c", 1, 1}}, dir / "bad.txt"), ValidationError);
}

TEST_CASE("manifest references are lazy") {
  TempDir dir("lazy");
  auto refs = save_triplets({small_triplet(1), small_triplet(2)}, dir.path());
  refs.push_back({"ghost", "A/ghost.png", "B/ghost.png", "C/ghost.png", 16, 16});
  write_manifest(refs, dir / "manifest.txt");
  CHECK(read_manifest(dir / "manifest.txt").size() == 3);
  const LoadResult r = load_manifest(dir / "manifest.txt");
  CHECK(r.triplets.size() == 2);
  REQUIRE(r.report.size() == 1);
  CHECK(r.report[0].id == "ghost");
}

TEST_CASE("malformed manifests name the line") {
  TempDir dir("malformed");
  auto write = [&](const std::string& text) {
    std::ofstream(dir / "m.txt") << text;
    return dir / "m.txt";
  };
  auto message = [&](const std::string& text) {
    try {
      read_manifest(write(text));
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("wrong header\n").find("line 1") != std::string::npos);
  CHECK(message(std::string(kManifestHeader) + "\na\tb\tc\n").find("line 2") != std::string::npos);
  CHECK(message(std::string(kManifestHeader) + "\n\na\tb\tc\td\tx\t3\n").find("line 3") != std::string::npos);
  CHECK(message(std::string(kManifestHeader) + "\na\tb\tc\td\t0\t3\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(read_manifest(dir / "absent.txt"), IoError);
}

TEST_CASE("manifest load rejects size mismatches") {
  TempDir dir("size");
  auto refs = save_triplets({small_triplet(1)}, dir.path());
  refs[0].width = 99;
  write_manifest(refs, dir / "manifest.txt");
  const LoadResult r = load_manifest(dir / "manifest.txt");
  CHECK(r.triplets.empty());
  CHECK(r.report.size() == 1);
}
