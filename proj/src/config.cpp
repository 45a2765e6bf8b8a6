#include "shadowkit/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace shadowkit {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
  return d;
}

int parse_int(const std::string& v) {
  std::size_t pos = 0;
  const int i = std::stoi(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return i;
}

}  // namespace

void Config::validate() const {
  if (!(edge_sigma > 0.0)) throw ValidationError("config: edge_sigma must be > 0");
  if (!(brightest_fraction > 0.0 && brightest_fraction <= 1.0)) {
    throw ValidationError("config: brightest_fraction must be in (0, 1]");
  }
  if (!(classifier.s > 0.0)) throw ValidationError("config: classifier_s must be > 0");
  if (output_dir.empty()) throw ValidationError("config: output_dir must not be empty");
  synth::SynthParams p;
  p.image_size = synth_size;
  p.polygon_vertices = synth_vertices;
  p.attenuation = synth_attenuation;
  p.penumbra_sigma = synth_penumbra;
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

Config parse_config(const std::string& text) {
  Config cfg;
  const std::map<std::string, std::function<void(const std::string&)>> setters{
      {"edge_sigma", [&](const std::string& v) { cfg.edge_sigma = parse_double(v); }},
      {"brightest_fraction", [&](const std::string& v) { cfg.brightest_fraction = parse_double(v); }},
      {"classifier_g0", [&](const std::string& v) { cfg.classifier.g0 = parse_double(v); }},
      {"classifier_s", [&](const std::string& v) { cfg.classifier.s = parse_double(v); }},
      {"synth_size", [&](const std::string& v) { cfg.synth_size = parse_int(v); }},
      {"synth_vertices", [&](const std::string& v) { cfg.synth_vertices = parse_int(v); }},
      {"synth_attenuation", [&](const std::string& v) { cfg.synth_attenuation = parse_double(v); }},
      {"synth_penumbra", [&](const std::string& v) { cfg.synth_penumbra = parse_double(v); }},
      {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
  };

  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ValidationError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ValidationError(where + "duplicate key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::logic_error&) {
      throw ValidationError(where + "bad value '" + value + "' for " + key);
    }
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace shadowkit
