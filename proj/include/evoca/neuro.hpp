#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace evoca {

/// Layer sizes of a fully connected feedforward network, input first.
/// At least three layers; the output layer always has two neurons
/// (left and right steering force).
class Topology {
 public:
  static constexpr std::size_t kOutputSize = 2;

  Topology() = default;
  /// Throws std::invalid_argument if the layer list is not a valid topology.
  explicit Topology(std::vector<std::size_t> layer_sizes);

  /// Convenience: inputs, a hidden-layer list, and the fixed 2-neuron output.
  static Topology with_hidden(std::size_t inputs, std::span<const std::size_t> hidden);

  const std::vector<std::size_t>& layers() const { return layers_; }
  std::size_t input_size() const { return layers_.front(); }
  std::size_t output_size() const { return layers_.back(); }
  std::size_t layer_count() const { return layers_.size(); }

  bool operator==(const Topology&) const = default;

 private:
  std::vector<std::size_t> layers_{1, 1, kOutputSize};
};

/// Flat weight vector in layer order. Within a layer block the outgoing
/// weights of each source neuron are consecutive and the bias node comes last.
struct Chromosome {
  std::vector<double> genes;

  std::size_t size() const { return genes.size(); }
  bool operator==(const Chromosome&) const = default;
};

/// Number of genes needed to encode every weight of `topology`.
std::size_t chromosome_length(const Topology& topology);

/// Weights of one layer pair, stored row-major as
/// (source_size + 1) rows by target_size columns; row `source_size` is the bias.
struct LayerWeights {
  std::size_t source_size = 0;
  std::size_t target_size = 0;
  std::vector<double> values;

  double& at(std::size_t source, std::size_t target) {
    return values[source * target_size + target];
  }
  double at(std::size_t source, std::size_t target) const {
    return values[source * target_size + target];
  }
  bool operator==(const LayerWeights&) const = default;
};

class FeedforwardNetwork {
 public:
  /// Zero-weight network for `topology`.
  explicit FeedforwardNetwork(Topology topology);

  const Topology& topology() const { return topology_; }
  const std::vector<LayerWeights>& layers() const { return layers_; }
  std::vector<LayerWeights>& layers() { return layers_; }

  /// Sigmoid forward pass. Throws std::invalid_argument on input size mismatch.
  std::vector<double> forward(std::span<const double> inputs) const;

  /// Allocation-free forward pass for the simulation hot loop; `scratch`
  /// is reused between calls. Returns the two output activations.
  std::span<const double> forward(std::span<const double> inputs,
                                  std::vector<double>& scratch) const;

  bool operator==(const FeedforwardNetwork&) const = default;

 private:
  Topology topology_;
  std::vector<LayerWeights> layers_;
  std::size_t widest_ = 0;
};

/// Throws std::invalid_argument naming expected and actual length on mismatch.
FeedforwardNetwork decode(const Chromosome& chromosome, const Topology& topology);
Chromosome encode(const FeedforwardNetwork& network);

/// Logistic function.
double sigmoid(double x);

/// Steering angle from the two output forces; positive turns left.
double steering_command(std::span<const double> outputs, double max_angle);

}  // namespace evoca
