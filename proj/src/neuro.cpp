#include "evoca/neuro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace evoca {

Topology::Topology(std::vector<std::size_t> layer_sizes) : layers_(std::move(layer_sizes)) {
  if (layers_.size() < 3) {
    throw std::invalid_argument("topology needs at least 3 layers, got " +
                                std::to_string(layers_.size()));
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i] == 0) {
      throw std::invalid_argument("topology layer " + std::to_string(i) + " is empty");
    }
  }
  if (layers_.back() != kOutputSize) {
    throw std::invalid_argument("topology output layer must have 2 neurons, got " +
                                std::to_string(layers_.back()));
  }
}

Topology Topology::with_hidden(std::size_t inputs, std::span<const std::size_t> hidden) {
  std::vector<std::size_t> sizes;
  sizes.reserve(hidden.size() + 2);
  sizes.push_back(inputs);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(kOutputSize);
  return Topology(std::move(sizes));
}

std::size_t chromosome_length(const Topology& topology) {
  const auto& sizes = topology.layers();
  std::size_t total = 0;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    total += (sizes[i] + 1) * sizes[i + 1];
  }
  return total;
}

FeedforwardNetwork::FeedforwardNetwork(Topology topology) : topology_(std::move(topology)) {
  const auto& sizes = topology_.layers();
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    LayerWeights layer;
    layer.source_size = sizes[i];
    layer.target_size = sizes[i + 1];
    layer.values.assign((sizes[i] + 1) * sizes[i + 1], 0.0);
    layers_.push_back(std::move(layer));
  }
  widest_ = *std::max_element(sizes.begin(), sizes.end());
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::span<const double> FeedforwardNetwork::forward(std::span<const double> inputs,
                                                    std::vector<double>& scratch) const {
  if (inputs.size() != topology_.input_size()) {
    throw std::invalid_argument("network expects " + std::to_string(topology_.input_size()) +
                                " inputs, got " + std::to_string(inputs.size()));
  }
  const std::size_t stride = widest_ + 1;
  if (scratch.size() < 2 * stride) scratch.assign(2 * stride, 0.0);
  double* current = scratch.data();
  double* next = scratch.data() + stride;
  std::copy(inputs.begin(), inputs.end(), current);

  for (const auto& layer : layers_) {
    current[layer.source_size] = 1.0;
    for (std::size_t t = 0; t < layer.target_size; ++t) next[t] = 0.0;
    const double* w = layer.values.data();
    for (std::size_t s = 0; s <= layer.source_size; ++s) {
      const double a = current[s];
      for (std::size_t t = 0; t < layer.target_size; ++t) next[t] += a * w[t];
      w += layer.target_size;
    }
    for (std::size_t t = 0; t < layer.target_size; ++t) next[t] = sigmoid(next[t]);
    std::swap(current, next);
  }
  return {current, topology_.output_size()};
}

std::vector<double> FeedforwardNetwork::forward(std::span<const double> inputs) const {
  std::vector<double> scratch;
  auto out = forward(inputs, scratch);
  return {out.begin(), out.end()};
}

FeedforwardNetwork decode(const Chromosome& chromosome, const Topology& topology) {
  const std::size_t expected = chromosome_length(topology);
  if (chromosome.size() != expected) {
    throw std::invalid_argument("chromosome length mismatch: expected " +
                                std::to_string(expected) + " genes, got " +
                                std::to_string(chromosome.size()));
  }
  FeedforwardNetwork network(topology);
  auto gene = chromosome.genes.begin();
  // Layer storage is already source-major with the bias row last, which is
  // exactly the gene order.
  for (auto& layer : network.layers()) {
    std::copy_n(gene, layer.values.size(), layer.values.begin());
    gene += static_cast<std::ptrdiff_t>(layer.values.size());
  }
  return network;
}

Chromosome encode(const FeedforwardNetwork& network) {
  Chromosome chromosome;
  chromosome.genes.reserve(chromosome_length(network.topology()));
  for (const auto& layer : network.layers()) {
    chromosome.genes.insert(chromosome.genes.end(), layer.values.begin(), layer.values.end());
  }
  return chromosome;
}

double steering_command(std::span<const double> outputs, double max_angle) {
  return max_angle * (outputs[0] - outputs[1]);
}

}  // namespace evoca
