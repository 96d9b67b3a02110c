#pragma once

// Truncated univariate Taylor jets up to order 4.
//
// coeff[k] holds the k-th derivative (not the Taylor coefficient) of the
// carried quantity with respect to one designated scalar input. Jets are
// generic over the scalar type so that jets of tape variables propagate input
// derivatives while staying differentiable with respect to parameters.

#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <utility>

#include "gln/autodiff/scalar.hpp"
#include "gln/autodiff/tape.hpp"
#include "gln/error.hpp"

namespace gln::ad {

inline constexpr int kMaxJetOrder = 4;

enum class UnaryOp { Sin, Cos, Tanh, Exp, Sqrt, Sigmoid, Neg, Recip };
enum class ArithOp { Add, Sub, Mul, Div };

inline const char* to_string(UnaryOp op);

namespace detail {

inline constexpr int kBinomial[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};

inline void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw StructuralError("jet order " + std::to_string(order) +
                          " outside 0..4");
  }
}

template <class S>
std::string describe_value(const S& x) {
  std::ostringstream os;
  os.precision(17);
  os << static_cast<double>(primal(x));
  return os.str();
}

}  // namespace detail

template <class S>
class Jet {
 public:
  Jet() = default;

  static Jet constant(const S& value, int order) {
    detail::check_order(order);
    Jet j;
    j.order_ = order;
    j.c_[0] = value;
    return j;
  }

  // The input variable itself: [x, 1, 0, ...].
  static Jet variable(const S& x, int order) {
    Jet j = constant(x, order);
    if (order >= 1) j.c_[1] = S(1.0);
    return j;
  }

  int order() const { return order_; }
  const S& operator[](int k) const { return c_[k]; }
  S& operator[](int k) { return c_[k]; }
  const S& value() const { return c_[0]; }
  std::span<const S> coeffs() const {
    return {c_.data(), static_cast<std::size_t>(order_ + 1)};
  }

  friend Jet operator+(Jet a, const S& s) {
    a.c_[0] = a.c_[0] + s;
    return a;
  }
  friend Jet operator+(const S& s, Jet a) { return std::move(a) + s; }
  friend Jet operator-(Jet a, const S& s) {
    a.c_[0] = a.c_[0] - s;
    return a;
  }
  friend Jet operator-(const S& s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, const S& s) {
    for (int k = 0; k <= a.order_; ++k) a.c_[k] = a.c_[k] * s;
    return a;
  }
  friend Jet operator*(const S& s, Jet a) { return std::move(a) * s; }
  friend Jet operator/(Jet a, const S& s) {
    if (primal(s) == 0.0) {
      throw EvalError("jet div: zero divisor");
    }
    for (int k = 0; k <= a.order_; ++k) a.c_[k] = a.c_[k] / s;
    return a;
  }
  friend Jet operator-(Jet a) {
    for (int k = 0; k <= a.order_; ++k) a.c_[k] = -a.c_[k];
    return a;
  }

 private:
  int order_ = 0;
  std::array<S, kMaxJetOrder + 1> c_{};
};

namespace detail {

template <class S>
void check_same_order(const Jet<S>& a, const Jet<S>& b, const char* op) {
  if (a.order() != b.order()) {
    throw StructuralError(std::string("jet ") + op + ": order mismatch (" +
                          std::to_string(a.order()) + " vs " +
                          std::to_string(b.order()) + ")");
  }
}

// h = f(g) given f's derivatives at g[0] (f[k] = f^(k)(g0), k <= order).
template <class S>
Jet<S> compose(const Jet<S>& g, const std::array<S, kMaxJetOrder + 1>& f) {
  const int n = g.order();
  Jet<S> h = Jet<S>::constant(f[0], n);
  if (n >= 1) h[1] = f[1] * g[1];
  if (n >= 2) {
    const S g1sq = g[1] * g[1];
    h[2] = f[2] * g1sq + f[1] * g[2];
    if (n >= 3) {
      h[3] = f[3] * g1sq * g[1] + 3.0 * f[2] * g[1] * g[2] + f[1] * g[3];
    }
    if (n >= 4) {
      h[4] = f[4] * g1sq * g1sq + 6.0 * f[3] * g1sq * g[2] +
             f[2] * (3.0 * g[2] * g[2] + 4.0 * g[1] * g[3]) + f[1] * g[4];
    }
  }
  return h;
}

}  // namespace detail

template <class S>
Jet<S> jet_arith(ArithOp op, const Jet<S>& a, const Jet<S>& b) {
  const int n = a.order();
  switch (op) {
    case ArithOp::Add: {
      detail::check_same_order(a, b, "add");
      Jet<S> r = a;
      for (int k = 0; k <= n; ++k) r[k] = a[k] + b[k];
      return r;
    }
    case ArithOp::Sub: {
      detail::check_same_order(a, b, "sub");
      Jet<S> r = a;
      for (int k = 0; k <= n; ++k) r[k] = a[k] - b[k];
      return r;
    }
    case ArithOp::Mul: {
      detail::check_same_order(a, b, "mul");
      Jet<S> r = Jet<S>::constant(a[0] * b[0], n);
      for (int m = 1; m <= n; ++m) {
        S acc = a[0] * b[m];
        for (int k = 1; k <= m; ++k) {
          const int c = detail::kBinomial[m][k];
          acc = acc + (c == 1 ? a[k] * b[m - k] : double(c) * a[k] * b[m - k]);
        }
        r[m] = acc;
      }
      return r;
    }
    case ArithOp::Div: {
      detail::check_same_order(a, b, "div");
      if (primal(b[0]) == 0.0) {
        throw EvalError("jet div: divisor has zero leading coefficient");
      }
      Jet<S> q = Jet<S>::constant(a[0] / b[0], n);
      for (int m = 1; m <= n; ++m) {
        S acc = a[m];
        for (int k = 1; k <= m; ++k) {
          acc = acc - double(detail::kBinomial[m][k]) * b[k] * q[m - k];
        }
        q[m] = acc / b[0];
      }
      return q;
    }
  }
  throw StructuralError("jet_arith: unknown op");
}

template <class S>
Jet<S> jet_apply_unary(UnaryOp op, const Jet<S>& x) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  using std::tanh;
  const int n = x.order();
  const S& x0 = x[0];
  const double v = static_cast<double>(primal(x0));
  if (!std::isfinite(v)) {
    throw EvalError(std::string("jet ") + to_string(op) +
                    ": non-finite argument " + detail::describe_value(x0));
  }
  std::array<S, kMaxJetOrder + 1> f{};
  switch (op) {
    case UnaryOp::Neg:
      return -x;
    case UnaryOp::Sin:
    case UnaryOp::Cos: {
      const S s = sin(x0);
      const S c = n >= 1 ? cos(x0) : S(0.0);
      // Derivatives cycle through sin, cos, -sin, -cos.
      const std::array<S, 4> cycle = {s, c, -s, -c};
      const int shift = op == UnaryOp::Sin ? 0 : 1;
      for (int k = 0; k <= n; ++k) f[k] = cycle[(k + shift) % 4];
      break;
    }
    case UnaryOp::Exp: {
      const S e = exp(x0);
      for (int k = 0; k <= n; ++k) f[k] = e;
      break;
    }
    case UnaryOp::Tanh: {
      const S t = tanh(x0);
      f[0] = t;
      if (n >= 1) {
        const S t2 = t * t;
        const S d1 = 1.0 - t2;
        f[1] = d1;
        if (n >= 2) f[2] = -2.0 * t * d1;
        if (n >= 3) f[3] = d1 * (6.0 * t2 - 2.0);
        if (n >= 4) f[4] = 8.0 * t * d1 * (2.0 - 3.0 * t2);
      }
      break;
    }
    case UnaryOp::Sigmoid: {
      const S s = sigmoid(x0);
      f[0] = s;
      if (n >= 1) {
        const S d1 = s * (1.0 - s);
        const S u = 1.0 - 2.0 * s;
        f[1] = d1;
        if (n >= 2) f[2] = d1 * u;
        if (n >= 3) f[3] = d1 * (1.0 - 6.0 * s + 6.0 * s * s);
        if (n >= 4) f[4] = d1 * u * (1.0 - 12.0 * s + 12.0 * s * s);
      }
      break;
    }
    case UnaryOp::Sqrt: {
      if (v < 0.0 || (v == 0.0 && n >= 1)) {
        throw EvalError("jet sqrt: argument " + detail::describe_value(x0) +
                        " outside domain");
      }
      f[0] = sqrt(x0);
      if (n >= 1) {
        const S inv = 1.0 / x0;
        f[1] = 0.5 / f[0];
        for (int k = 2; k <= n; ++k) f[k] = f[k - 1] * (1.5 - k) * inv;
      }
      break;
    }
    case UnaryOp::Recip: {
      if (v == 0.0) {
        throw EvalError("jet recip: argument " + detail::describe_value(x0) +
                        " outside domain");
      }
      const S inv = 1.0 / x0;
      f[0] = inv;
      for (int k = 1; k <= n; ++k) f[k] = f[k - 1] * (-double(k)) * inv;
      break;
    }
  }
  return detail::compose(x, f);
}

template <class S>
Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
  return jet_arith(ArithOp::Add, a, b);
}
template <class S>
Jet<S> operator-(const Jet<S>& a, const Jet<S>& b) {
  return jet_arith(ArithOp::Sub, a, b);
}
template <class S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  return jet_arith(ArithOp::Mul, a, b);
}
template <class S>
Jet<S> operator/(const Jet<S>& a, const Jet<S>& b) {
  return jet_arith(ArithOp::Div, a, b);
}

template <class S>
Jet<S> sin(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Sin, x); }
template <class S>
Jet<S> cos(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Cos, x); }
template <class S>
Jet<S> tanh(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Tanh, x); }
template <class S>
Jet<S> exp(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Exp, x); }
template <class S>
Jet<S> sqrt(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Sqrt, x); }
template <class S>
Jet<S> sigmoid(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Sigmoid, x); }
template <class S>
Jet<S> recip(const Jet<S>& x) { return jet_apply_unary(UnaryOp::Recip, x); }

template <class S>
const S& primal(const Jet<S>& x) { return x.value(); }

inline const char* to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tanh: return "tanh";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Sigmoid: return "sigmoid";
    case UnaryOp::Neg: return "neg";
    case UnaryOp::Recip: return "recip";
  }
  return "?";
}

}  // namespace gln::ad
