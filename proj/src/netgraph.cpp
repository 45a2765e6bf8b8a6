#include "shadowkit/netgraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "shadowkit/synth.hpp"

namespace shadowkit::netgraph {

FeatureMap::FeatureMap(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 1 || height < 1 || width < 1) {
    throw DomainError("FeatureMap: channels, height and width must be >= 1");
  }
  data_.assign(static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
                   static_cast<std::size_t>(width),
               fill);
}

void ConvSpec::validate() const {
  if (in_channels < 1 || out_channels < 1) throw DomainError("ConvSpec: channel counts must be >= 1");
  if (kernel_size < 1 || kernel_size % 2 == 0) throw DomainError("ConvSpec: kernel size must be odd");
  if (stride < 1 || padding < 0) throw DomainError("ConvSpec: bad stride or padding");
  const auto expected = static_cast<std::size_t>(out_channels) * static_cast<std::size_t>(in_channels) *
                        static_cast<std::size_t>(kernel_size * kernel_size);
  if (weights.size() != expected) throw DomainError("ConvSpec: weight tensor must be out x in x k x k");
  if (!bias.empty() && bias.size() != static_cast<std::size_t>(out_channels)) {
    throw DomainError("ConvSpec: bias must have out_channels entries");
  }
}

ConvSpec ConvSpec::identity(int channels) {
  ConvSpec c{channels, channels, 1, 1, 0, {}, {}};
  c.weights.assign(static_cast<std::size_t>(channels) * static_cast<std::size_t>(channels), 0.0);
  for (int i = 0; i < channels; ++i) c.weights[static_cast<std::size_t>(i) * channels + i] = 1.0;
  c.bias.assign(static_cast<std::size_t>(channels), 0.0);
  return c;
}

void BNSpec::validate() const {
  const std::size_t n = mean.size();
  if (n == 0 || variance.size() != n || gamma.size() != n || beta.size() != n) {
    throw DomainError("BNSpec: per-channel vectors must be non-empty and equally sized");
  }
  for (double v : variance) {
    if (!(v >= 0.0)) throw DomainError("BNSpec: variance must be >= 0");
  }
  if (!(epsilon > 0.0)) throw DomainError("BNSpec: epsilon must be > 0");
}

BNSpec BNSpec::identity(int channels) {
  const auto n = static_cast<std::size_t>(channels);
  return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0), std::vector<double>(n, 1.0),
          std::vector<double>(n, 0.0), 1e-5};
}

FeatureMap bilinear_resize(const FeatureMap& f, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw DomainError("bilinear_resize: output size must be >= 1");
  if (out_h == f.height() && out_w == f.width()) return f;

  struct Tap {
    int i0, i1;
    double t;
  };
  auto taps = [](int out, int in) {
    std::vector<Tap> result(static_cast<std::size_t>(out));
    const double scale = static_cast<double>(in) / out;
    for (int i = 0; i < out; ++i) {
      const double src = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(in - 1));
      const int i0 = static_cast<int>(std::floor(src));
      const int i1 = std::min(i0 + 1, in - 1);
      result[static_cast<std::size_t>(i)] = {i0, i1, src - i0};
    }
    return result;
  };
  const auto ty = taps(out_h, f.height());
  const auto tx = taps(out_w, f.width());

  FeatureMap out(f.channels(), out_h, out_w);
  for (int c = 0; c < f.channels(); ++c) {
    for (int y = 0; y < out_h; ++y) {
      const Tap& a = ty[static_cast<std::size_t>(y)];
      for (int x = 0; x < out_w; ++x) {
        const Tap& b = tx[static_cast<std::size_t>(x)];
        const double top = f(c, a.i0, b.i0) * (1.0 - b.t) + f(c, a.i0, b.i1) * b.t;
        const double bottom = f(c, a.i1, b.i0) * (1.0 - b.t) + f(c, a.i1, b.i1) * b.t;
        out(c, y, x) = top * (1.0 - a.t) + bottom * a.t;
      }
    }
  }
  return out;
}

FeatureMap conv2d(const FeatureMap& x, const ConvSpec& conv) {
  conv.validate();
  if (x.channels() != conv.in_channels) {
    throw DomainError("conv2d: input has " + std::to_string(x.channels()) + " channels, conv expects " +
                      std::to_string(conv.in_channels));
  }
  const int k = conv.kernel_size;
  const int out_h = (x.height() + 2 * conv.padding - k) / conv.stride + 1;
  const int out_w = (x.width() + 2 * conv.padding - k) / conv.stride + 1;
  if (out_h < 1 || out_w < 1) throw DomainError("conv2d: input smaller than kernel");

  FeatureMap out(conv.out_channels, out_h, out_w);
  for (int o = 0; o < conv.out_channels; ++o) {
    const double b = conv.bias.empty() ? 0.0 : conv.bias[static_cast<std::size_t>(o)];
    for (int y = 0; y < out_h; ++y) {
      for (int xx = 0; xx < out_w; ++xx) out(o, y, xx) = b;
    }
    for (int i = 0; i < conv.in_channels; ++i) {
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          const double w = conv.weight(o, i, ky, kx);
          if (w == 0.0) continue;
          for (int y = 0; y < out_h; ++y) {
            const int sy = y * conv.stride + ky - conv.padding;
            if (sy < 0 || sy >= x.height()) continue;
            for (int xx = 0; xx < out_w; ++xx) {
              const int sx = xx * conv.stride + kx - conv.padding;
              if (sx < 0 || sx >= x.width()) continue;
              out(o, y, xx) += w * x(i, sy, sx);
            }
          }
        }
      }
    }
  }
  return out;
}

FeatureMap batch_norm(const FeatureMap& x, const BNSpec& bn) {
  bn.validate();
  if (bn.channels() != x.channels()) throw DomainError("batch_norm: channel count mismatch");
  FeatureMap out = x;
  for (int c = 0; c < x.channels(); ++c) {
    const auto ci = static_cast<std::size_t>(c);
    const double scale = bn.gamma[ci] / std::sqrt(bn.variance[ci] + bn.epsilon);
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) out(c, y, xx) = scale * (x(c, y, xx) - bn.mean[ci]) + bn.beta[ci];
    }
  }
  return out;
}

FeatureMap relu(const FeatureMap& x) {
  FeatureMap out = x;
  for (double& v : out.data()) v = std::max(0.0, v);
  return out;
}

FeatureMap conv_bn_relu(const FeatureMap& x, const ConvSpec& conv, const BNSpec& bn) {
  if (bn.channels() != conv.out_channels) throw DomainError("conv_bn_relu: BN channels differ from conv output");
  return relu(batch_norm(conv2d(x, conv), bn));
}

double mish(double x) noexcept {
  // softplus(x) = max(x, 0) + log1p(exp(-|x|))
  const double softplus = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
  return x * std::tanh(softplus);
}

FeatureMap mish(const FeatureMap& x) {
  FeatureMap out = x;
  for (double& v : out.data()) v = mish(v);
  return out;
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

FeatureMap scse_forward(const FeatureMap& x, const ChannelGate& gate, const ConvSpec& spatial) {
  const int C = x.channels();
  if (gate.channels != C || gate.hidden < 1 ||
      gate.w1.size() != static_cast<std::size_t>(gate.hidden) * static_cast<std::size_t>(C) ||
      gate.w2.size() != static_cast<std::size_t>(gate.hidden) * static_cast<std::size_t>(C)) {
    throw DomainError("scse_forward: channel gate does not match input channels");
  }
  if (spatial.in_channels != C || spatial.out_channels != 1 || spatial.kernel_size != 1 || spatial.stride != 1) {
    throw DomainError("scse_forward: spatial gate must be a 1x1 conv from C channels to 1");
  }

  const double area = static_cast<double>(x.height()) * x.width();
  std::vector<double> pooled(static_cast<std::size_t>(C), 0.0);
  for (int c = 0; c < C; ++c) {
    double s = 0.0;
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) s += x(c, y, xx);
    }
    pooled[static_cast<std::size_t>(c)] = s / area;
  }
  std::vector<double> hidden(static_cast<std::size_t>(gate.hidden), 0.0);
  for (int h = 0; h < gate.hidden; ++h) {
    double s = 0.0;
    for (int c = 0; c < C; ++c) s += gate.w1[static_cast<std::size_t>(h) * C + c] * pooled[static_cast<std::size_t>(c)];
    hidden[static_cast<std::size_t>(h)] = std::max(0.0, s);
  }
  std::vector<double> channel_gate(static_cast<std::size_t>(C), 0.0);
  for (int c = 0; c < C; ++c) {
    double s = 0.0;
    for (int h = 0; h < gate.hidden; ++h) {
      s += gate.w2[static_cast<std::size_t>(c) * gate.hidden + h] * hidden[static_cast<std::size_t>(h)];
    }
    channel_gate[static_cast<std::size_t>(c)] = sigmoid(s);
  }

  const FeatureMap logits = conv2d(x, spatial);
  FeatureMap out(C, x.height(), x.width());
  for (int c = 0; c < C; ++c) {
    const double cg = channel_gate[static_cast<std::size_t>(c)];
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        const double v = x(c, y, xx);
        out(c, y, xx) = v * cg + v * sigmoid(logits(0, y, xx));
      }
    }
  }
  return out;
}

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw DomainError("concat_channels: spatial sizes differ");
  }
  FeatureMap out(a.channels() + b.channels(), a.height(), a.width());
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

FeatureMap multi_featfusion_pool(const FeatureMap& a, const FeatureMap& b, const ConvSpec& conv,
                                 const BNSpec& bn) {
  if (conv.in_channels != a.channels() + b.channels()) {
    throw DomainError("multi_featfusion_pool: conv expects " + std::to_string(conv.in_channels) +
                      " channels, inputs provide " + std::to_string(a.channels() + b.channels()));
  }
  return conv_bn_relu(concat_channels(a, bilinear_resize(b, a.height(), a.width())), conv, bn);
}

// --- graph ----------------------------------------------------------------

std::string to_string(const NodeId& id) {
  return "(" + std::to_string(id.row) + "," + std::to_string(id.index) + ")";
}

const Node& UnetPPGraph::node(NodeId id) const { return nodes[node_index(id)]; }

std::size_t UnetPPGraph::node_index(NodeId id) const {
  if (id.row < 0 || id.row >= static_cast<int>(rows.size()) || id.index < 0 ||
      id.index >= rows[static_cast<std::size_t>(id.row)]) {
    throw DomainError("no node " + to_string(id) + " in graph");
  }
  std::size_t offset = 0;
  for (int r = 0; r < id.row; ++r) offset += static_cast<std::size_t>(rows[static_cast<std::size_t>(r)]);
  return offset + static_cast<std::size_t>(id.index);
}

std::size_t UnetPPGraph::count(EdgeKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

std::vector<Edge> UnetPPGraph::incoming(NodeId id) const {
  std::vector<Edge> result;
  for (const Edge& e : edges) {
    if (e.to == id) result.push_back(e);
  }
  return result;
}

UnetPPGraph build_unetpp_graph(const std::vector<int>& rows, int base_channels, int input_channels) {
  if (rows.empty()) throw ValidationError("row profile is empty");
  if (rows.back() != 1) throw ValidationError("row profile must end with a single node");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r] != rows[r - 1] - 1) throw ValidationError("row profile must decrease by exactly 1 per row");
  }
  if (rows.size() > 16) throw ValidationError("row profile has too many rows");
  if (base_channels < 1) throw ValidationError("base channel count must be >= 1");
  if (input_channels < 1) throw ValidationError("input channel count must be >= 1");

  UnetPPGraph g;
  g.rows = rows;
  g.base_channels = base_channels;
  g.input_channels = input_channels;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    const int c = g.channels_at_row(r);
    for (int j = 0; j < rows[static_cast<std::size_t>(r)]; ++j) {
      Node n{{r, j}, c, c, 1};
      if (j == 0) {
        n.in_channels = r == 0 ? input_channels : g.channels_at_row(r - 1);
        n.stride = r == 0 ? 1 : 2;
        if (r > 0) g.edges.push_back({{r - 1, 0}, {r, 0}, EdgeKind::down});
      } else {
        for (int k = 0; k < j; ++k) g.edges.push_back({{r, k}, {r, j}, EdgeKind::skip});
        g.edges.push_back({{r + 1, j - 1}, {r, j}, EdgeKind::up});
      }
      g.nodes.push_back(n);
    }
  }
  return g;
}

std::vector<NodeShape> shape_propagate(const UnetPPGraph& g, int height, int width) {
  if (height < 1 || width < 1) throw ValidationError("input size must be positive");
  std::vector<NodeShape> shapes(g.nodes.size());
  const int row_count = static_cast<int>(g.rows.size());
  std::vector<std::pair<int, int>> row_dims(static_cast<std::size_t>(row_count));
  row_dims[0] = {height, width};
  for (int r = 1; r < row_count; ++r) {
    const auto [h, w] = row_dims[static_cast<std::size_t>(r - 1)];
    if (h % 2 != 0 || w % 2 != 0) {
      throw ValidationError("node " + to_string({r, 0}) + ": input " + std::to_string(h) + "x" +
                            std::to_string(w) + " cannot be halved (input size must be divisible by " +
                            std::to_string(1 << (row_count - 1)) + ")");
    }
    row_dims[static_cast<std::size_t>(r)] = {h / 2, w / 2};
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Node& n = g.nodes[i];
    const auto [h, w] = row_dims[static_cast<std::size_t>(n.id.row)];
    for (const Edge& e : g.incoming(n.id)) {
      if (e.kind != EdgeKind::up) continue;
      const auto [uh, uw] = row_dims[static_cast<std::size_t>(e.from.row)];
      if (uh * 2 != h || uw * 2 != w) {
        throw ValidationError("node " + to_string(n.id) + ": up-sampled input does not match row size");
      }
    }
    shapes[i] = {n.id, n.out_channels, h, w};
  }
  return shapes;
}

FeatureMap residual_forward(const FeatureMap& x, const ResidualBlock& block) {
  const FeatureMap body =
      scse_forward(mish(batch_norm(conv2d(x, block.conv), block.bn)), block.gate, block.spatial);
  const FeatureMap skip = block.has_projection ? conv2d(x, block.projection) : x;
  if (skip.channels() != body.channels() || skip.height() != body.height() || skip.width() != body.width()) {
    throw DomainError("residual_forward: skip and body shapes differ");
  }
  FeatureMap out = body;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += skip.data()[i];
  return out;
}

namespace {

ConvSpec random_conv(synth::Lcg64& rng, int in, int out, int k, int stride, bool with_bias) {
  ConvSpec c{in, out, k, stride, (k - 1) / 2, {}, {}};
  const double bound = std::sqrt(3.0 / (static_cast<double>(in) * k * k));
  c.weights.resize(static_cast<std::size_t>(out) * static_cast<std::size_t>(in) * static_cast<std::size_t>(k * k));
  for (double& w : c.weights) w = rng.uniform(-bound, bound);
  if (with_bias) {
    c.bias.resize(static_cast<std::size_t>(out));
    for (double& b : c.bias) b = rng.uniform(-0.1, 0.1);
  }
  return c;
}

BNSpec random_bn(synth::Lcg64& rng, int channels) {
  BNSpec bn = BNSpec::identity(channels);
  for (int c = 0; c < channels; ++c) {
    const auto i = static_cast<std::size_t>(c);
    bn.mean[i] = rng.uniform(-0.1, 0.1);
    bn.variance[i] = rng.uniform(0.5, 1.5);
    bn.gamma[i] = rng.uniform(0.8, 1.2);
    bn.beta[i] = rng.uniform(-0.1, 0.1);
  }
  return bn;
}

ChannelGate random_gate(synth::Lcg64& rng, int channels) {
  ChannelGate g{channels, std::max(1, channels / 2), {}, {}};
  const auto n = static_cast<std::size_t>(g.hidden) * static_cast<std::size_t>(channels);
  g.w1.resize(n);
  g.w2.resize(n);
  const double b1 = std::sqrt(3.0 / channels);
  const double b2 = std::sqrt(3.0 / g.hidden);
  for (double& w : g.w1) w = rng.uniform(-b1, b1);
  for (double& w : g.w2) w = rng.uniform(-b2, b2);
  return g;
}

}  // namespace

GraphWeights init_weights(const UnetPPGraph& g, std::uint64_t seed) {
  synth::Lcg64 rng(seed);
  GraphWeights w;
  for (const Node& n : g.nodes) {
    NodeParams p;
    if (n.id.index > 0) {
      p.has_fusion = true;
      const int fused_in = n.id.index * g.channels_at_row(n.id.row) + g.channels_at_row(n.id.row + 1);
      p.fusion_conv = random_conv(rng, fused_in, n.in_channels, 1, 1, true);
      p.fusion_bn = random_bn(rng, n.in_channels);
    }
    ResidualBlock& b = p.block;
    b.conv = random_conv(rng, n.in_channels, n.out_channels, 3, n.stride, true);
    b.bn = random_bn(rng, n.out_channels);
    b.gate = random_gate(rng, n.out_channels);
    b.spatial = random_conv(rng, n.out_channels, 1, 1, 1, true);
    b.has_projection = n.in_channels != n.out_channels || n.stride != 1;
    if (b.has_projection) b.projection = random_conv(rng, n.in_channels, n.out_channels, 1, n.stride, false);
    w.nodes.push_back(std::move(p));
  }
  return w;
}

std::vector<FeatureMap> forward(const UnetPPGraph& g, const GraphWeights& w, const FeatureMap& input) {
  if (w.nodes.size() != g.nodes.size()) throw DomainError("forward: weights do not match graph");
  if (input.channels() != g.input_channels) throw DomainError("forward: input channel count mismatch");
  shape_propagate(g, input.height(), input.width());

  std::vector<FeatureMap> out(g.nodes.size());
  // Column-major order: column j depends on column j-1 only.
  const int columns = g.rows.front();
  for (int j = 0; j < columns; ++j) {
    for (int r = 0; r < static_cast<int>(g.rows.size()); ++r) {
      if (j >= g.rows[static_cast<std::size_t>(r)]) continue;
      const std::size_t idx = g.node_index({r, j});
      const NodeParams& p = w.nodes[idx];
      FeatureMap x;
      if (j == 0) {
        x = r == 0 ? input : out[g.node_index({r - 1, 0})];
      } else {
        FeatureMap skips = out[g.node_index({r, 0})];
        for (int k = 1; k < j; ++k) skips = concat_channels(skips, out[g.node_index({r, k})]);
        x = multi_featfusion_pool(skips, out[g.node_index({r + 1, j - 1})], p.fusion_conv, p.fusion_bn);
      }
      out[idx] = residual_forward(x, p.block);
    }
  }
  return out;
}

std::uint64_t checksum(const FeatureMap& f) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : f.data()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= bits & 0xffU;
      h *= 0x100000001b3ULL;
      bits >>= 8;
    }
  }
  return h;
}

}  // namespace shadowkit::netgraph
