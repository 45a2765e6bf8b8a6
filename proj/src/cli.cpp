#include "shadowkit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "shadowkit/chroma.hpp"
#include "shadowkit/config.hpp"
#include "shadowkit/data_io.hpp"
#include "shadowkit/edges.hpp"
#include "shadowkit/fusion.hpp"
#include "shadowkit/metrics.hpp"
#include "shadowkit/netgraph.hpp"
#include "shadowkit/synth.hpp"

namespace shadowkit::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double grad_norm(const Grid<Rgb>& g) {
  double s = 0.0;
  for (const Rgb& p : g.pixels()) s += p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  return std::sqrt(s);
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError(std::string(what) + ": '" + text + "' is not a comma-separated integer list");
    }
  }
  if (values.empty()) throw ValidationError(std::string(what) + ": empty list");
  return values;
}

fusion::FusionWeights parse_weights(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, extra;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || std::getline(ss, extra, ',')) {
    throw ValidationError("--weights expects H,S");
  }
  fusion::FusionWeights w;
  try {
    w.p_hard = std::stod(a);
    w.p_soft = std::stod(b);
  } catch (const std::logic_error&) {
    throw ValidationError("--weights expects two numbers, got '" + text + "'");
  }
  w.validate();
  return w;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
}

// Every subcommand's options, filled in by CLI11.
struct Options {
  std::string config_path;

  std::string input, output, angle_report;
  std::string mask, gt, pred, hard, soft, weights;
  std::string loss_kind;
  double sigma = 0.0;
  double brightest_fraction = 0.0;
  double g0 = 0.0, scale = 0.0;
  bool csv = false;

  std::string rows = "6,5,4,3,2,1";
  int size = 256;
  int base = 32;
  std::uint64_t seed = 1;

  double penumbra = 0.0, attenuation = 0.0;
  int synth_size = 0, vertices = 0;
  double shift_angle = 0.0, shift_magnitude = 0.0;
};

// Applies a CLI flag over the config value when the flag was given.
template <typename T>
void override(T& target, const CLI::Option* opt, const T& value) {
  if (opt->count() > 0) target = value;
}

int cmd_chroma(const Options& o, const Config& cfg, std::ostream& out) {
  const ImageRGB img = io::read_png_rgb(o.input);
  const auto result = chroma::shadow_free_chromaticity_detailed(img, {cfg.brightest_fraction});
  io::write_png_rgb(o.output, result.chroma);
  out << "angle: " << result.sweep.angle_deg << '\n' << "entropy: " << fmt(result.sweep.entropy) << '\n';
  if (!o.angle_report.empty()) {
    ensure_parent(o.angle_report);
    std::ofstream csv(o.angle_report);
    if (!csv) throw IoError("cannot write '" + o.angle_report + "'");
    csv << "angle,entropy\n";
    for (std::size_t i = 0; i < result.sweep.per_angle_entropy.size(); ++i) {
      csv << (i + 1) << ',' << fmt(result.sweep.per_angle_entropy[i]) << '\n';
    }
    if (!csv) throw IoError("error writing '" + o.angle_report + "'");
  }
  return kExitOk;
}

int cmd_edgemask(const Options& o, const Config& cfg, std::ostream& out) {
  const ShadowMask mask = io::read_png_mask(o.mask);
  const EdgeMask edge = edges::edge_mask(mask, cfg.edge_sigma);
  io::write_png_mask(o.output, edge);
  out << "edge_pixels: " << edge.count() << '\n';
  return kExitOk;
}

int cmd_loss(const Options& o, const Config& cfg, std::ostream& out) {
  const ImageRGB gt = io::read_png_rgb(o.gt);
  const ImageRGB pred = io::read_png_rgb(o.pred);
  LossResult r;
  if (o.loss_kind == "edge") {
    EdgeMask edge(gt.width(), gt.height());
    if (o.mask.empty()) {
      std::fill(edge.pixels().begin(), edge.pixels().end(), std::uint8_t{1});
    } else {
      edge = edges::edge_mask(io::read_png_mask(o.mask), cfg.edge_sigma);
    }
    r = edges::edge_loss(gt, pred, edge);
  } else {
    const ChromaticityMap target = chroma::shadow_free_chromaticity(gt, {cfg.brightest_fraction});
    r = chroma::chromaticity_loss(pred, target);
  }
  out << "loss: " << fmt(r.loss) << '\n' << "grad_norm: " << fmt(grad_norm(r.gradient)) << '\n';
  return kExitOk;
}

int cmd_classify(const Options& o, const Config& cfg, std::ostream& out) {
  const ImageRGB img = io::read_png_rgb(o.input);
  const ShadowMask mask = io::read_png_mask(o.mask);
  const auto w = fusion::classify_shadow_softness(img, mask, cfg.classifier);
  out << "boundary_gradient: " << fmt(fusion::mean_boundary_gradient(img, mask)) << '\n'
      << "p_hard: " << fmt(w.p_hard) << '\n'
      << "p_soft: " << fmt(w.p_soft) << '\n';
  return kExitOk;
}

int cmd_fuse(const Options& o, const Config&, std::ostream& out) {
  const fusion::FusionWeights w = parse_weights(o.weights);
  const ImageRGB hard = io::read_png_rgb(o.hard);
  const ImageRGB soft = io::read_png_rgb(o.soft);
  io::write_png_rgb(o.output, fusion::fuse_outputs(hard, soft, w));
  out << "wrote: " << o.output << '\n';
  return kExitOk;
}

int cmd_eval(const Options& o, const Config&, std::ostream& out) {
  const ImageRGB pred = io::read_png_rgb(o.pred);
  const ImageRGB gt = io::read_png_rgb(o.gt);
  const ShadowMask mask = io::read_png_mask(o.mask);
  const auto report = metrics::region_report(pred, gt, mask);
  if (o.csv) {
    out << metrics::EvalReport::csv_header() << '\n' << report.to_csv_row() << '\n';
  } else {
    out << report.to_key_value();
  }
  return kExitOk;
}

int cmd_netcheck(const Options& o, const Config&, std::ostream& out, bool run_forward) {
  using namespace netgraph;
  const UnetPPGraph g = build_unetpp_graph(parse_int_list(o.rows, "--rows"), o.base);
  const auto shapes = shape_propagate(g, o.size, o.size);
  out << "nodes: " << g.nodes.size() << '\n'
      << "edges_down: " << g.count(EdgeKind::down) << '\n'
      << "edges_up: " << g.count(EdgeKind::up) << '\n'
      << "edges_skip: " << g.count(EdgeKind::skip) << '\n'
      << "node\tchannels\theight\twidth\n";
  for (const NodeShape& s : shapes) {
    out << to_string(s.id) << '\t' << s.channels << '\t' << s.height << '\t' << s.width << '\n';
  }
  const NodeShape& bottom = shapes.back();
  out << "bottom node " << to_string(bottom.id) << ": " << bottom.channels << "×" << bottom.height << "×"
      << bottom.width << '\n';
  const NodeShape& top = shapes[g.node_index(g.output())];
  out << "output node " << to_string(top.id) << ": " << top.channels << "×" << top.height << "×" << top.width
      << '\n';

  if (run_forward) {
    const GraphWeights w = init_weights(g, o.seed);
    FeatureMap input(g.input_channels, o.size, o.size);
    synth::Lcg64 rng(o.seed ^ 0x5EED5EED5EED5EEDULL);
    for (double& v : input.data()) v = rng.uniform();
    const auto outputs = forward(g, w, input);
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      out << "checksum " << to_string(g.nodes[i].id) << ": " << hex(checksum(outputs[i])) << '\n';
    }
  }
  return kExitOk;
}

int cmd_synth(const Options& o, const Config& cfg, std::ostream& out) {
  synth::SynthParams p;
  p.base_seed = o.seed;
  p.image_size = cfg.synth_size;
  p.polygon_vertices = cfg.synth_vertices;
  p.attenuation = cfg.synth_attenuation;
  p.penumbra_sigma = cfg.synth_penumbra;
  const double rad = o.shift_angle * std::numbers::pi / 180.0;
  p.chroma_shift = {o.shift_magnitude * std::cos(rad), o.shift_magnitude * std::sin(rad)};
  const io::Triplet t = synth::synthesize_triplet(p);
  io::save_triplets({t}, cfg.output_dir);
  out << "id: " << t.id << '\n' << "dir: " << cfg.output_dir << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shadow-removal toolkit: chromaticity, edge losses, fusion, metrics, graph checks"};
  app.name("shadowkit");
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "Flat key = value defaults file");

  auto* chroma = app.add_subcommand("chroma", "Shadow-free chromaticity by entropy minimization");
  chroma->add_option("input", o.input, "Input RGB PNG")->required();
  chroma->add_option("-o,--output", o.output, "Output chromaticity PNG")->required();
  chroma->add_option("--angle-report", o.angle_report, "CSV of the entropy curve");
  auto* chroma_frac = chroma->add_option("--brightest-fraction", o.brightest_fraction);

  auto* edgemask = app.add_subcommand("edgemask", "Blurred-Sobel edge mask of a shadow mask");
  edgemask->add_option("mask", o.mask, "Shadow mask PNG")->required();
  edgemask->add_option("-o,--output", o.output, "Output mask PNG")->required();
  auto* edge_sigma = edgemask->add_option("--sigma", o.sigma, "Gaussian sigma in pixels");

  auto* loss = app.add_subcommand("loss", "Edge or chromaticity loss and gradient norm");
  loss->add_option("kind", o.loss_kind, "edge | chroma")->required()->check(CLI::IsMember({"edge", "chroma"}));
  loss->add_option("gt", o.gt, "Ground-truth PNG")->required();
  loss->add_option("out", o.pred, "Network output PNG")->required();
  loss->add_option("--mask", o.mask, "Shadow mask PNG (edge loss support)");
  auto* loss_sigma = loss->add_option("--sigma", o.sigma, "Edge-mask sigma");

  auto* classify = app.add_subcommand("classify", "Hard/soft shadow probabilities");
  classify->add_option("image", o.input, "Shadow image PNG")->required();
  classify->add_option("mask", o.mask, "Shadow mask PNG")->required();
  auto* cls_g0 = classify->add_option("--g0", o.g0, "Logistic center");
  auto* cls_s = classify->add_option("--scale", o.scale, "Logistic scale");

  auto* fuse = app.add_subcommand("fuse", "Convex combination of two outputs");
  fuse->add_option("hard", o.hard, "Hard-pathway output PNG")->required();
  fuse->add_option("soft", o.soft, "Soft-pathway output PNG")->required();
  fuse->add_option("--weights", o.weights, "p_hard,p_soft")->required();
  fuse->add_option("-o,--output", o.output, "Fused PNG")->required();

  auto* eval = app.add_subcommand("eval", "Region-wise RMSE / PSNR / SSIM");
  eval->add_option("pred", o.pred, "Prediction PNG")->required();
  eval->add_option("gt", o.gt, "Ground-truth PNG")->required();
  eval->add_option("mask", o.mask, "Shadow mask PNG")->required();
  eval->add_flag("--csv", o.csv, "Emit a CSV header and row");

  auto* netcheck = app.add_subcommand("netcheck", "Graph shape table and forward checksums");
  netcheck->add_option("--rows", o.rows, "Per-row node counts");
  netcheck->add_option("--size", o.size, "Square input size");
  netcheck->add_option("--base", o.base, "Channels of the top row");
  auto* net_seed = netcheck->add_option("--seed", o.seed, "Run a seeded forward pass");

  auto* synth = app.add_subcommand("synth", "Write one synthetic triplet");
  synth->add_option("--seed", o.seed, "Scene seed")->required();
  auto* syn_pen = synth->add_option("--penumbra", o.penumbra, "Penumbra sigma in pixels");
  auto* syn_att = synth->add_option("--attenuation", o.attenuation, "Shadow brightness factor");
  auto* syn_size = synth->add_option("--size", o.synth_size, "Image side length");
  auto* syn_vert = synth->add_option("--vertices", o.vertices, "Polygon vertex count");
  synth->add_option("--shift-angle", o.shift_angle, "Chroma-shift direction in degrees");
  synth->add_option("--shift", o.shift_magnitude, "Chroma-shift magnitude");
  auto* syn_out = synth->add_option("-o,--output", o.output, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitInvalid;
  }

  try {
    Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
    override(cfg.brightest_fraction, chroma_frac, o.brightest_fraction);
    override(cfg.edge_sigma, edge_sigma, o.sigma);
    override(cfg.edge_sigma, loss_sigma, o.sigma);
    override(cfg.classifier.g0, cls_g0, o.g0);
    override(cfg.classifier.s, cls_s, o.scale);
    override(cfg.synth_penumbra, syn_pen, o.penumbra);
    override(cfg.synth_attenuation, syn_att, o.attenuation);
    override(cfg.synth_size, syn_size, o.synth_size);
    override(cfg.synth_vertices, syn_vert, o.vertices);
    override(cfg.output_dir, syn_out, o.output);
    cfg.validate();

    if (chroma->parsed()) return cmd_chroma(o, cfg, out);
    if (edgemask->parsed()) return cmd_edgemask(o, cfg, out);
    if (loss->parsed()) return cmd_loss(o, cfg, out);
    if (classify->parsed()) return cmd_classify(o, cfg, out);
    if (fuse->parsed()) return cmd_fuse(o, cfg, out);
    if (eval->parsed()) return cmd_eval(o, cfg, out);
    if (netcheck->parsed()) return cmd_netcheck(o, cfg, out, net_seed->count() > 0);
    if (synth->parsed()) return cmd_synth(o, cfg, out);
    err << app.help();
    return kExitInvalid;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace shadowkit::cli
