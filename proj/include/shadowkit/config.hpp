#pragma once

#include <filesystem>
#include <string>

#include "shadowkit/edges.hpp"
#include "shadowkit/fusion.hpp"
#include "shadowkit/synth.hpp"

namespace shadowkit {

/// Defaults shared by the CLI subcommands. Loaded from a flat text file of
/// `key = value` lines; `#` starts a comment.
///
///   edge_sigma, brightest_fraction, classifier_g0, classifier_s,
///   synth_size, synth_vertices, synth_attenuation, synth_penumbra,
///   output_dir
struct Config {
  double edge_sigma = edges::kDefaultSigma;
  double brightest_fraction = 0.01;
  fusion::SoftnessProxy classifier{};
  int synth_size = 128;
  int synth_vertices = 6;
  double synth_attenuation = 0.5;
  double synth_penumbra = 0.0;
  std::string output_dir = ".";

  /// Throws ValidationError when a field violates its module's precondition.
  void validate() const;
};

/// Parses and validates. Unknown keys, duplicate keys and malformed values
/// are ValidationErrors naming the line.
Config parse_config(const std::string& text);

/// Throws IoError when the file cannot be read.
Config load_config(const std::filesystem::path& path);

}  // namespace shadowkit
