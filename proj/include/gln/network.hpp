#pragma once

// Dense feed-forward models with sine, tanh, Global-Local (GLN) and identity
// activations, plus the two-branch network (TBN).
//
// A Network is a set of parallel branches of hidden layers whose final
// activations are concatenated and read out by a single linear neuron (the
// head). An MLP has one branch; a TBN has a sine branch and a tanh branch of
// half width each. All trainable values live in one flat parameter vector so
// the same forward routine serves plain reals, tape variables and jets.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gln/autodiff/jet.hpp"
#include "gln/autodiff/scalar.hpp"
#include "gln/autodiff/tape.hpp"
#include "gln/error.hpp"

namespace gln {

enum class Activation { Sin, Tanh, Gln, Identity };

// Model regime: which activation the hidden layers use.
enum class ModelKind { Gln, Sin, Tanh, Tbn };

std::string_view to_string(Activation a);
std::string_view to_string(ModelKind m);
Activation parse_activation(std::string_view s);
ModelKind parse_model_kind(std::string_view s);

// Activation of one neuron. For Gln, z is the gate pre-activation
// (alpha = sigmoid(z)) and act_bias the subtracted bias; both are shared by
// every neuron of a layer.
struct ActivationSpec {
  Activation kind = Activation::Identity;
  double z = 0.0;
  double act_bias = 0.0;

  double alpha() const { return ad::sigmoid(z); }
};

// sigmoid(z) * sin(x) + (1 - sigmoid(z)) * tanh(x) - act_bias.
double gln_activate(double x, const ActivationSpec& spec);

// Applies any activation kind to one pre-activation value.
double activate(double x, const ActivationSpec& spec);

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::Identity;
  std::size_t offset = 0;  // first parameter in the flat vector

  // Layout: weights (out x in, row-major), biases (out), then z and act_bias
  // for Gln layers.
  std::size_t weight_offset() const { return offset; }
  std::size_t bias_offset() const { return offset + in * out; }
  std::size_t gate_offset() const { return offset + in * out + out; }
  std::size_t param_count() const {
    return in * out + out + (activation == Activation::Gln ? 2 : 0);
  }
};

struct NetworkShape {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden;  // widths of the single-network baseline

  static NetworkShape one_hidden(std::size_t input_dim, std::size_t width = 20) {
    return {input_dim, {width}};
  }
  static NetworkShape two_hidden(std::size_t input_dim, std::size_t width = 20) {
    return {input_dim, {width, width}};
  }
};

struct AlphaEntry {
  std::size_t layer = 0;  // 1-based hidden layer index
  double alpha = 0.0;
};

class Network {
 public:
  using Branch = std::vector<DenseLayer>;

  // All parameters zero (z = 0, so alpha = 0.5).
  Network(const NetworkShape& shape, ModelKind kind);

  const NetworkShape& shape() const { return shape_; }
  ModelKind kind() const { return kind_; }
  std::size_t input_dim() const { return shape_.input_dim; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  const std::vector<Branch>& branches() const { return branches_; }
  const DenseLayer& head() const { return head_; }

  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  std::size_t param_count() const { return params_.size(); }
  void set_params(std::span<const double> values);
  Network with_params(std::span<const double> values) const;

  // Plain evaluation.
  double operator()(std::span<const double> input) const {
    return forward<double, double>(params_, input);
  }
  double operator()(double x) const {
    return (*this)(std::span<const double>(&x, 1));
  }

  // Layer-by-layer evaluation with inputs of type T and parameters of type P.
  // T may be P itself or a jet over P.
  template <class T, class P>
  T forward(std::span<const P> params, std::span<const T> input) const;

  std::vector<AlphaEntry> alpha_values() const;

 private:
  template <class T, class P>
  static void apply_layer(const DenseLayer& layer, std::span<const P> params,
                          const std::vector<T>& in, std::vector<T>& out);

  NetworkShape shape_;
  ModelKind kind_;
  std::uint64_t seed_ = 0;
  std::vector<Branch> branches_;
  DenseLayer head_;
  std::vector<double> params_;
};

// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero biases,
// z = 0 and act_bias = 0. Deterministic per seed.
Network init(const NetworkShape& shape, ModelKind kind, std::uint64_t seed);

// MSE over a batch and its gradient, using layer-wise backpropagation.
// inputs holds one row of input_dim values per sample.
double batch_mse_and_grad(const Network& net, std::span<const double> inputs,
                          std::span<const double> targets,
                          std::span<double> grad);
void batch_predict(const Network& net, std::span<const double> inputs,
                   std::span<double> out);

// Self-describing JSON document; parameters round-trip exactly.
std::string to_json(const Network& net);
Network network_from_json(std::string_view text);
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

// ---------------------------------------------------------------------------

template <class T, class P>
void Network::apply_layer(const DenseLayer& layer, std::span<const P> params,
                          const std::vector<T>& in, std::vector<T>& out) {
  using ad::sigmoid;
  using std::sin;
  using std::tanh;
  const P* w = params.data() + layer.weight_offset();
  const P* b = params.data() + layer.bias_offset();
  out.clear();
  out.reserve(layer.out);

  P alpha{};
  P one_minus_alpha{};
  P act_bias{};
  if (layer.activation == Activation::Gln) {
    alpha = sigmoid(params[layer.gate_offset()]);
    one_minus_alpha = 1.0 - alpha;
    act_bias = params[layer.gate_offset() + 1];
  }

  for (std::size_t o = 0; o < layer.out; ++o) {
    const P* row = w + o * layer.in;
    T acc = in[0] * row[0];
    for (std::size_t i = 1; i < layer.in; ++i) acc = acc + in[i] * row[i];
    acc = acc + b[o];
    switch (layer.activation) {
      case Activation::Sin:
        out.push_back(sin(acc));
        break;
      case Activation::Tanh:
        out.push_back(tanh(acc));
        break;
      case Activation::Gln:
        out.push_back(alpha * sin(acc) + one_minus_alpha * tanh(acc) - act_bias);
        break;
      case Activation::Identity:
        out.push_back(acc);
        break;
    }
  }
}

template <class T, class P>
T Network::forward(std::span<const P> params, std::span<const T> input) const {
  if (input.size() != shape_.input_dim) {
    throw StructuralError("forward: input has " + std::to_string(input.size()) +
                          " values, network expects " +
                          std::to_string(shape_.input_dim));
  }
  if (params.size() != params_.size()) {
    throw StructuralError("forward: parameter vector has wrong length");
  }
  std::vector<T> features;
  features.reserve(head_.in);
  std::vector<T> cur;
  std::vector<T> next;
  for (const Branch& branch : branches_) {
    cur.assign(input.begin(), input.end());
    for (const DenseLayer& layer : branch) {
      apply_layer(layer, params, cur, next);
      std::swap(cur, next);
    }
    features.insert(features.end(), cur.begin(), cur.end());
  }
  std::vector<T> out;
  apply_layer(head_, params, features, out);
  return out[0];
}

}  // namespace gln
