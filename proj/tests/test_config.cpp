#include <doctest.h>

#include <fstream>

#include "shadowkit/config.hpp"
#include "support.hpp"

using namespace shadowkit;

TEST_CASE("defaults") {
  const Config c = parse_config("");
  CHECK(c.edge_sigma == 2.0);
  CHECK(c.brightest_fraction == 0.01);
  CHECK(c.classifier.g0 == fusion::SoftnessProxy{}.g0);
  CHECK(c.output_dir == ".");
}

TEST_CASE("keys, comments and whitespace") {
  const Config c = parse_config(
      "# defaults for a run\n"
      "edge_sigma = 3.5\n"
      "  brightest_fraction=0.05   # five percent\n"
      "\n"
      "classifier_g0 = 0.4\n"
      "classifier_s = 0.1\n"
      "synth_size = 64\n"
      "synth_vertices = 5\n"
      "synth_attenuation = 0.3\n"
      "synth_penumbra = 2\n"
      "output_dir = out/run1\n");
  CHECK(c.edge_sigma == 3.5);
  CHECK(c.brightest_fraction == 0.05);
  CHECK(c.classifier.g0 == 0.4);
  CHECK(c.classifier.s == 0.1);
  CHECK(c.synth_size == 64);
  CHECK(c.synth_vertices == 5);
  CHECK(c.synth_attenuation == 0.3);
  CHECK(c.synth_penumbra == 2.0);
  CHECK(c.output_dir == "out/run1");
}

TEST_CASE("invalid configs") {
  CHECK_THROWS_AS(parse_config("colour = red\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("edge_sigma 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("edge_sigma = two\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("edge_sigma = 2x\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("edge_sigma = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("edge_sigma = 1\nedge_sigma = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("brightest_fraction = 1.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("classifier_s = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("synth_attenuation = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("synth_size = 3\n"), ValidationError);
  try {
    parse_config("edge_sigma = 1\n\nbogus = 1\n");
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("loading from disk") {
  testing::TempDir dir("cfg");
  std::ofstream(dir / "c.cfg") << "edge_sigma = 1.25\n";
  CHECK(load_config(dir / "c.cfg").edge_sigma == 1.25);
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), IoError);
}
