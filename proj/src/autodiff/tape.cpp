#include "gln/autodiff/tape.hpp"

#include <string>

#include "gln/error.hpp"

namespace gln::ad {

std::uint32_t Tape::push_node() {
  edge_begin_.push_back(static_cast<std::uint32_t>(parent_.size()));
  return static_cast<std::uint32_t>(edge_begin_.size() - 2);
}

Var Tape::variable(double value) {
  const auto idx = push_node();
  return Var(value, this, idx);
}

std::vector<Var> Tape::variables(std::span<const double> values) {
  std::vector<Var> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(variable(v));
  return out;
}

Var Tape::unary(double value, const Var& a, double da) {
  if (a.is_constant()) return Var(value);
  parent_.push_back(a.index());
  partial_.push_back(da);
  const auto idx = push_node();
  return Var(value, this, idx);
}

Var Tape::binary(double value, const Var& a, double da, const Var& b,
                 double db) {
  if (a.is_constant()) return unary(value, b, db);
  if (b.is_constant()) return unary(value, a, da);
  if (a.tape() != b.tape()) {
    throw StructuralError("autodiff: operands recorded on different tapes");
  }
  parent_.push_back(a.index());
  partial_.push_back(da);
  parent_.push_back(b.index());
  partial_.push_back(db);
  const auto idx = push_node();
  return Var(value, this, idx);
}

Var Tape::sum(std::span<const Var> terms) {
  double value = 0.0;
  bool any = false;
  for (const Var& t : terms) {
    value += t.value();
    if (t.is_constant()) continue;
    if (t.tape() != this) {
      throw StructuralError("autodiff: sum over a foreign tape");
    }
    parent_.push_back(t.index());
    partial_.push_back(1.0);
    any = true;
  }
  if (!any) return Var(value);
  const auto idx = push_node();
  return Var(value, this, idx);
}

void Tape::clear() {
  edge_begin_.assign(1, 0);
  parent_.clear();
  partial_.clear();
}

void Tape::reserve(std::size_t nodes, std::size_t edges) {
  edge_begin_.reserve(nodes + 1);
  parent_.reserve(edges);
  partial_.reserve(edges);
}

std::vector<double> Tape::backward(const Var& root) const {
  std::vector<double> adj(size(), 0.0);
  if (root.is_constant()) return adj;
  if (root.tape() != this) {
    throw StructuralError("autodiff: root belongs to another tape");
  }
  adj[root.index()] = 1.0;
  for (std::size_t i = root.index() + 1; i-- > 0;) {
    const double a = adj[i];
    if (a == 0.0) continue;
    for (std::uint32_t e = edge_begin_[i]; e < edge_begin_[i + 1]; ++e) {
      adj[parent_[e]] += a * partial_[e];
    }
  }
  // Edges only point backwards, so the root adjoint is never touched again.
  return adj;
}

ParamGrad Tape::grad(const Var& root, std::span<const Var> wrt) const {
  if (!std::isfinite(root.value())) {
    throw EvalError("grad: loss is not finite (" + std::to_string(root.value()) +
                    ")");
  }
  const auto adj = backward(root);
  ParamGrad g{std::vector<double>(wrt.size(), 0.0)};
  for (std::size_t i = 0; i < wrt.size(); ++i) {
    if (wrt[i].is_constant()) continue;
    if (wrt[i].tape() != this) {
      throw StructuralError("grad: parameter recorded on another tape");
    }
    g.values[i] = adj[wrt[i].index()];
  }
  return g;
}

ParamGrad grad(const Var& root, std::span<const Var> wrt) {
  if (root.is_constant()) {
    if (!std::isfinite(root.value())) {
      throw EvalError("grad: loss is not finite (" +
                      std::to_string(root.value()) + ")");
    }
    return ParamGrad{std::vector<double>(wrt.size(), 0.0)};
  }
  return root.tape()->grad(root, wrt);
}

namespace {

Tape* tape_of(const Var& a, const Var& b) {
  return a.is_constant() ? b.tape() : a.tape();
}

}  // namespace

Var operator+(const Var& a, const Var& b) {
  if (a.is_constant() && a.value() == 0.0) return b;
  if (b.is_constant() && b.value() == 0.0) return a;
  Tape* t = tape_of(a, b);
  const double v = a.value() + b.value();
  return t ? t->binary(v, a, 1.0, b, 1.0) : Var(v);
}

Var operator-(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double v = a.value() - b.value();
  return t ? t->binary(v, a, 1.0, b, -1.0) : Var(v);
}

Var operator*(const Var& a, const Var& b) {
  // Constant zeros are common in jets; skip recording when the product is
  // exactly zero.
  if ((a.is_constant() && a.value() == 0.0 && std::isfinite(b.value())) ||
      (b.is_constant() && b.value() == 0.0 && std::isfinite(a.value()))) {
    return Var(0.0);
  }
  Tape* t = tape_of(a, b);
  const double v = a.value() * b.value();
  return t ? t->binary(v, a, b.value(), b, a.value()) : Var(v);
}

Var operator/(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double inv = 1.0 / b.value();
  const double v = a.value() * inv;
  return t ? t->binary(v, a, inv, b, -v * inv) : Var(a.value() / b.value());
}

Var operator-(const Var& a) {
  return a.is_constant() ? Var(-a.value())
                         : a.tape()->unary(-a.value(), a, -1.0);
}

Var sin(const Var& x) {
  const double v = std::sin(x.value());
  return x.is_constant() ? Var(v) : x.tape()->unary(v, x, std::cos(x.value()));
}

Var cos(const Var& x) {
  const double v = std::cos(x.value());
  return x.is_constant() ? Var(v) : x.tape()->unary(v, x, -std::sin(x.value()));
}

Var tanh(const Var& x) {
  const double v = std::tanh(x.value());
  return x.is_constant() ? Var(v) : x.tape()->unary(v, x, 1.0 - v * v);
}

Var exp(const Var& x) {
  const double v = std::exp(x.value());
  return x.is_constant() ? Var(v) : x.tape()->unary(v, x, v);
}

Var sqrt(const Var& x) {
  const double v = std::sqrt(x.value());
  return x.is_constant() ? Var(v) : x.tape()->unary(v, x, 0.5 / v);
}

Var sigmoid(const Var& x) {
  const double v = 1.0 / (1.0 + std::exp(-x.value()));
  return x.is_constant() ? Var(v) : x.tape()->unary(v, x, v * (1.0 - v));
}

}  // namespace gln::ad
