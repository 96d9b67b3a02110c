#pragma once

// Reverse-mode automatic differentiation over scalars.
//
// A Tape is an append-only Wengert list. Each node stores the partial
// derivatives with respect to its parents, so the backward pass is a single
// reverse sweep accumulating adjoints. A Var is a lightweight handle carrying
// its primal value; a Var without a tape is a constant and records nothing.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace gln::ad {

class Tape;

class Var {
 public:
  Var() = default;
  Var(double value) : value_(value) {}  // NOLINT: constants convert implicitly

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  Tape* tape() const { return tape_; }
  std::uint32_t index() const { return index_; }

 private:
  friend class Tape;
  Var(double value, Tape* tape, std::uint32_t index)
      : value_(value), tape_(tape), index_(index) {}

  double value_ = 0.0;
  Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
};

// Gradient of a scalar with respect to an ordered list of leaves.
struct ParamGrad {
  std::vector<double> values;
};

class Tape {
 public:
  Tape() { edge_begin_.push_back(0); }

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double value);
  std::vector<Var> variables(std::span<const double> values);

  // Records value = f(a) with df/da = da. Constant parents yield constants.
  Var unary(double value, const Var& a, double da);
  Var binary(double value, const Var& a, double da, const Var& b, double db);
  // Sum of all terms as a single node.
  Var sum(std::span<const Var> terms);

  std::size_t size() const { return edge_begin_.size() - 1; }
  void clear();
  void reserve(std::size_t nodes, std::size_t edges);

  // Adjoints of every node after seeding the root with 1.
  std::vector<double> backward(const Var& root) const;

  // Gradient of root with respect to wrt. Throws EvalError when the root
  // value is not finite, before any backward work is done.
  ParamGrad grad(const Var& root, std::span<const Var> wrt) const;

 private:
  std::uint32_t push_node();

  std::vector<std::uint32_t> edge_begin_;
  std::vector<std::uint32_t> parent_;
  std::vector<double> partial_;
};

// Gradient of root with respect to wrt; constant roots give zeros.
ParamGrad grad(const Var& root, std::span<const Var> wrt);

// Arithmetic.

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

inline Var operator+(const Var& a, double b) { return a + Var(b); }
inline Var operator+(double a, const Var& b) { return Var(a) + b; }
inline Var operator-(const Var& a, double b) { return a - Var(b); }
inline Var operator-(double a, const Var& b) { return Var(a) - b; }
inline Var operator*(const Var& a, double b) { return a * Var(b); }
inline Var operator*(double a, const Var& b) { return Var(a) * b; }
inline Var operator/(const Var& a, double b) { return a / Var(b); }
inline Var operator/(double a, const Var& b) { return Var(a) / b; }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

// Elementary functions.

Var sin(const Var& x);
Var cos(const Var& x);
Var tanh(const Var& x);
Var exp(const Var& x);
Var sqrt(const Var& x);
Var sigmoid(const Var& x);

inline double primal(const Var& x) { return x.value(); }

}  // namespace gln::ad
