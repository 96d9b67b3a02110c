#include "gln/network.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace gln {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Sin: return "sin";
    case Activation::Tanh: return "tanh";
    case Activation::Gln: return "gln";
    case Activation::Identity: return "identity";
  }
  return "?";
}

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Gln: return "gln";
    case ModelKind::Sin: return "sin";
    case ModelKind::Tanh: return "tanh";
    case ModelKind::Tbn: return "tbn";
  }
  return "?";
}

Activation parse_activation(std::string_view s) {
  for (auto a : {Activation::Sin, Activation::Tanh, Activation::Gln,
                 Activation::Identity}) {
    if (to_string(a) == s) return a;
  }
  throw StructuralError("unknown activation '" + std::string(s) + "'");
}

ModelKind parse_model_kind(std::string_view s) {
  for (auto m : {ModelKind::Gln, ModelKind::Sin, ModelKind::Tanh, ModelKind::Tbn}) {
    if (to_string(m) == s) return m;
  }
  throw StructuralError("unknown model '" + std::string(s) +
                        "' (expected gln, sin, tanh or tbn)");
}

double gln_activate(double x, const ActivationSpec& spec) {
  if (spec.kind != Activation::Gln) {
    throw StructuralError("gln_activate: activation spec is not Gln");
  }
  const double alpha = spec.alpha();
  return alpha * std::sin(x) + (1.0 - alpha) * std::tanh(x) - spec.act_bias;
}

double activate(double x, const ActivationSpec& spec) {
  switch (spec.kind) {
    case Activation::Sin: return std::sin(x);
    case Activation::Tanh: return std::tanh(x);
    case Activation::Gln: return gln_activate(x, spec);
    case Activation::Identity: return x;
  }
  return x;
}

Network::Network(const NetworkShape& shape, ModelKind kind)
    : shape_(shape), kind_(kind) {
  if (shape.input_dim == 0 || shape.hidden.empty()) {
    throw StructuralError("network shape needs an input and at least one hidden layer");
  }
  for (std::size_t w : shape.hidden) {
    if (w == 0) throw StructuralError("network shape has an empty hidden layer");
    if (kind == ModelKind::Tbn && w % 2 != 0) {
      throw StructuralError("two-branch network needs even hidden widths");
    }
  }

  std::vector<std::pair<Activation, std::size_t>> branch_specs;
  switch (kind) {
    case ModelKind::Gln: branch_specs = {{Activation::Gln, 1}}; break;
    case ModelKind::Sin: branch_specs = {{Activation::Sin, 1}}; break;
    case ModelKind::Tanh: branch_specs = {{Activation::Tanh, 1}}; break;
    case ModelKind::Tbn:
      branch_specs = {{Activation::Sin, 2}, {Activation::Tanh, 2}};
      break;
  }

  std::size_t offset = 0;
  std::size_t features = 0;
  for (const auto& [act, divisor] : branch_specs) {
    Branch branch;
    std::size_t in = shape.input_dim;
    for (std::size_t w : shape.hidden) {
      DenseLayer layer{in, w / divisor, act, offset};
      offset += layer.param_count();
      in = layer.out;
      branch.push_back(layer);
    }
    features += in;
    branches_.push_back(std::move(branch));
  }
  head_ = DenseLayer{features, 1, Activation::Identity, offset};
  offset += head_.param_count();
  params_.assign(offset, 0.0);
}

void Network::set_params(std::span<const double> values) {
  if (values.size() != params_.size()) {
    throw StructuralError("set_params: expected " + std::to_string(params_.size()) +
                          " values, got " + std::to_string(values.size()));
  }
  params_.assign(values.begin(), values.end());
}

Network Network::with_params(std::span<const double> values) const {
  Network copy = *this;
  copy.set_params(values);
  return copy;
}

std::vector<AlphaEntry> Network::alpha_values() const {
  std::vector<AlphaEntry> out;
  for (const Branch& branch : branches_) {
    for (std::size_t l = 0; l < branch.size(); ++l) {
      if (branch[l].activation != Activation::Gln) continue;
      out.push_back({l + 1, ad::sigmoid(params_[branch[l].gate_offset()])});
    }
  }
  return out;
}

Network init(const NetworkShape& shape, ModelKind kind, std::uint64_t seed) {
  Network net(shape, kind);
  net.set_seed(seed);
  std::mt19937_64 rng(seed);
  auto params = net.params();
  auto fill = [&](const DenseLayer& layer) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (std::size_t i = 0; i < layer.in * layer.out; ++i) {
      params[layer.weight_offset() + i] = dist(rng);
    }
  };
  for (const auto& branch : net.branches()) {
    for (const auto& layer : branch) fill(layer);
  }
  fill(net.head());
  return net;
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_json(const Network& net) {
  nlohmann::json doc;
  doc["format"] = "gln-network";
  doc["version"] = 1;
  doc["model"] = std::string(to_string(net.kind()));
  doc["input_dim"] = net.input_dim();
  doc["hidden"] = net.shape().hidden;
  doc["seed"] = net.seed();
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t b = 0; b < net.branches().size(); ++b) {
    for (const auto& layer : net.branches()[b]) {
      layers.push_back({{"branch", b},
                        {"in", layer.in},
                        {"out", layer.out},
                        {"activation", std::string(to_string(layer.activation))}});
    }
  }
  layers.push_back({{"branch", "head"},
                    {"in", net.head().in},
                    {"out", net.head().out},
                    {"activation", "identity"}});
  doc["layers"] = std::move(layers);
  doc["params"] = std::vector<double>(net.params().begin(), net.params().end());
  return doc.dump(1);
}

Network network_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("network document: ") + e.what());
  }
  if (doc.value("format", "") != "gln-network") {
    throw DataError("network document: missing format tag 'gln-network'");
  }
  try {
    NetworkShape shape{doc.at("input_dim").get<std::size_t>(),
                       doc.at("hidden").get<std::vector<std::size_t>>()};
    Network net(shape, parse_model_kind(doc.at("model").get<std::string>()));
    net.set_seed(doc.at("seed").get<std::uint64_t>());
    net.set_params(doc.at("params").get<std::vector<double>>());
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("network document: ") + e.what());
  }
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << to_json(net) << '\n';
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

}  // namespace gln
