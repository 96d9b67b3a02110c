#pragma once

// Shared helpers for the unit and acceptance tests.

#include <cmath>
#include <fstream>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gln/network.hpp"
#include "json.hpp"

namespace gln::testkit {

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

inline std::string oracle_path(const std::string& name) {
  return std::string(GLN_ORACLE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Plain forward pass in long double, so finite differences of it resolve
// fourth derivatives.
inline long double forward_ld(const Network& net, std::span<const long double> input) {
  std::vector<long double> p(net.params().begin(), net.params().end());
  return net.forward<long double, long double>(p, input);
}

// Central-difference derivative of the given order (1..4).
inline long double central_difference(const std::function<long double(long double)>& f,
                                      long double x, int order) {
  const long double h = order == 1 ? 1e-6L : order == 2 ? 1e-4L : 1e-3L;
  switch (order) {
    case 1:
      return (f(x + h) - f(x - h)) / (2 * h);
    case 2:
      return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    case 4:
      return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) /
             (h * h * h * h);
  }
  throw std::invalid_argument("central_difference: order must be 1..4");
}

// |a - b| / max(|a|, |b|, floor).
inline double rel_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace gln::testkit

#include <random>

namespace gln::testkit {

// Glorot weights plus random biases, gates and activation biases, so every
// parameter carries gradient signal.
inline Network random_network(const NetworkShape& shape, ModelKind kind, std::uint64_t seed) {
  Network net = init(shape, kind, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> bias(-0.5, 0.5);
  std::uniform_real_distribution<double> gate(-2.0, 2.0);
  auto p = net.params();
  auto touch = [&](const DenseLayer& layer) {
    for (std::size_t o = 0; o < layer.out; ++o) p[layer.bias_offset() + o] = bias(rng);
    if (layer.activation == Activation::Gln) {
      p[layer.gate_offset()] = gate(rng);
      p[layer.gate_offset() + 1] = 0.2 * bias(rng);
    }
  };
  for (const auto& branch : net.branches()) {
    for (const auto& layer : branch) touch(layer);
  }
  touch(net.head());
  return net;
}

// Copies every dense weight and bias of src into dst (same shape, one
// branch each), leaving dst's gate parameters alone.
inline void copy_dense(const Network& src, Network& dst) {
  auto sp = src.params();
  auto dp = dst.params();
  auto copy_layer = [&](const DenseLayer& s, const DenseLayer& d) {
    for (std::size_t i = 0; i < s.in * s.out + s.out; ++i) {
      dp[d.weight_offset() + i] = sp[s.weight_offset() + i];
    }
  };
  const auto& sb = src.branches().at(0);
  const auto& db = dst.branches().at(0);
  for (std::size_t l = 0; l < sb.size(); ++l) copy_layer(sb[l], db[l]);
  copy_layer(src.head(), dst.head());
}

}  // namespace gln::testkit
