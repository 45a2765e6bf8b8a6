#pragma once

// Forward-only reference of the generator's fusion machinery: Conv-BN-ReLU
// fusion pooling and a UNet++ nested-skip graph of residual blocks. Weights
// are synthetic; nothing here trains.

#include <cstdint>
#include <string>
#include <vector>

#include "shadowkit/error.hpp"

namespace shadowkit::netgraph {

/// C x H x W tensor, channel-major.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width, double fill = 0.0);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }
  double operator()(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }
  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Zero-padded strided convolution. weights are out x in x k x k.
struct ConvSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kernel_size = 1;
  int stride = 1;
  int padding = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double weight(int o, int i, int ky, int kx) const noexcept {
    return weights[((static_cast<std::size_t>(o) * in_channels + i) * kernel_size + ky) * kernel_size + kx];
  }
  void validate() const;
  /// 1x1 convolution mapping channel i to channel i (in == out), zero bias.
  static ConvSpec identity(int channels);
};

/// Inference-mode batch normalization.
struct BNSpec {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> gamma;
  std::vector<double> beta;
  double epsilon = 1e-5;

  int channels() const noexcept { return static_cast<int>(mean.size()); }
  void validate() const;
  static BNSpec identity(int channels);
};

/// Channel-squeeze weights of the scSE block (reduction ratio 2, no bias).
struct ChannelGate {
  int channels = 0;
  int hidden = 0;
  std::vector<double> w1;  ///< hidden x channels
  std::vector<double> w2;  ///< channels x hidden
};

// --- primitives -----------------------------------------------------------

/// Half-pixel-centre bilinear resampling, edge-clamped.
FeatureMap bilinear_resize(const FeatureMap& f, int out_h, int out_w);

FeatureMap conv2d(const FeatureMap& x, const ConvSpec& conv);
FeatureMap batch_norm(const FeatureMap& x, const BNSpec& bn);
FeatureMap relu(const FeatureMap& x);

/// max(0, BN(Conv(x))).
FeatureMap conv_bn_relu(const FeatureMap& x, const ConvSpec& conv, const BNSpec& bn);

/// x * tanh(softplus(x)), softplus evaluated stably.
double mish(double x) noexcept;
FeatureMap mish(const FeatureMap& x);

double sigmoid(double x) noexcept;

/// x * sigmoid(W2 relu(W1 GAP(x))) + x * sigmoid(spatial 1x1 conv(x)).
FeatureMap scse_forward(const FeatureMap& x, const ChannelGate& gate, const ConvSpec& spatial);

/// Concatenate along channels, `a` first.
FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b);

/// Resize b to a's spatial size, concatenate (a, b), then Conv-BN-ReLU.
FeatureMap multi_featfusion_pool(const FeatureMap& a, const FeatureMap& b, const ConvSpec& conv,
                                 const BNSpec& bn);

// --- UNet++ graph ---------------------------------------------------------

struct NodeId {
  int row = 0;
  int index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(const NodeId& id);

enum class EdgeKind { down, up, skip };

struct Edge {
  NodeId from;
  NodeId to;
  EdgeKind kind;
};

struct Node {
  NodeId id;
  int in_channels = 0;   ///< channels entering the residual block
  int out_channels = 0;
  int stride = 1;        ///< 2 for the first node of rows below the top
};

/// Triangular nested-skip topology. Row r holds rows[r] nodes with
/// base_channels * 2^r channels. Node (r,0), r>0, is fed by a stride-2
/// down edge from (r-1,0); node (r,j), j>=1, by an up edge from (r+1,j-1)
/// and dense skips from (r,0..j-1), merged by fusion pooling.
struct UnetPPGraph {
  std::vector<int> rows;
  int base_channels = 0;
  int input_channels = 0;
  std::vector<Node> nodes;  ///< row-major: (0,0), (0,1), ..., (1,0), ...
  std::vector<Edge> edges;

  const Node& node(NodeId id) const;
  std::size_t node_index(NodeId id) const;
  int channels_at_row(int row) const noexcept { return base_channels << row; }
  NodeId output() const noexcept { return {0, rows.front() - 1}; }
  std::size_t count(EdgeKind kind) const noexcept;
  std::vector<Edge> incoming(NodeId id) const;
};

/// Throws ValidationError unless rows decrease by exactly 1 down to a final 1.
UnetPPGraph build_unetpp_graph(const std::vector<int>& rows, int base_channels, int input_channels = 3);

struct NodeShape {
  NodeId id;
  int channels = 0;
  int height = 0;
  int width = 0;
};

/// Throws ValidationError naming the first node whose input cannot be halved.
std::vector<NodeShape> shape_propagate(const UnetPPGraph& g, int height, int width);

/// Parameters of one residual block: conv -> BN -> Mish -> scSE, plus an
/// identity or 1x1-projection skip.
struct ResidualBlock {
  ConvSpec conv;
  BNSpec bn;
  ChannelGate gate;
  ConvSpec spatial;
  bool has_projection = false;
  ConvSpec projection;
};

FeatureMap residual_forward(const FeatureMap& x, const ResidualBlock& block);

struct NodeParams {
  bool has_fusion = false;  ///< nodes with j >= 1 merge skips and the up edge first
  ConvSpec fusion_conv;
  BNSpec fusion_bn;
  ResidualBlock block;
};

struct GraphWeights {
  std::vector<NodeParams> nodes;  ///< parallel to UnetPPGraph::nodes
};

/// Seeded, platform-independent weight draw (scaled uniform).
GraphWeights init_weights(const UnetPPGraph& g, std::uint64_t seed);

/// Runs every node in dependency order; returns per-node outputs parallel
/// to g.nodes.
std::vector<FeatureMap> forward(const UnetPPGraph& g, const GraphWeights& w, const FeatureMap& input);

/// FNV-1a over the IEEE-754 bytes of every value.
std::uint64_t checksum(const FeatureMap& f) noexcept;

}  // namespace shadowkit::netgraph
