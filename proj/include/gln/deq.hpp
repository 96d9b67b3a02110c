#pragma once

// Differential-equation problems solved by residual minimization.
//
// The network output u_hat is wrapped in a trial solution u_tilde that
// satisfies the initial and boundary conditions by construction. Input
// derivatives of u_tilde come from pushing jets through both the network and
// the trial transform, one jet per input axis, so the residual stays
// differentiable with respect to the network parameters when the jets carry
// tape variables.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gln/autodiff/jet.hpp"
#include "gln/network.hpp"
#include "gln/training.hpp"

namespace gln::deq {

using ad::Jet;

enum class ProblemKind { Decay, Catenary, Sho, Damped, Laplace, Heat, KuramotoSivashinsky };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

using Point = std::array<double, 2>;
using AxisOrders = std::array<int, 2>;

struct DeqProblem {
  ProblemKind kind = ProblemKind::Decay;
  std::string name;
  std::size_t input_dim = 1;
  std::array<std::string, 2> axis_names;
  std::array<Interval, 2> domain;
  AxisOrders max_order = {0, 0};
  std::size_t epochs = 0;  // fixed training budget
  bool has_analytic = true;

  double catenary_boundary = 3.76;
  double heat_k = 0.3;
  double heat_length = 2.0;
  double ks_beta = 1.0;
  double ks_gamma = 1.0;
};

DeqProblem make_problem(ProblemKind kind);
DeqProblem problem_by_name(std::string_view name);
const std::vector<ProblemKind>& all_problem_kinds();

// ũ and its derivatives along each input axis (axis 1 unused for 1-D).
template <class S>
struct SolutionJets {
  std::array<Jet<S>, 2> axis;

  const S& value() const { return axis[0][0]; }
};

// A candidate solution evaluated at a point with the requested jet orders.
template <class S>
using SolutionFn = std::function<SolutionJets<S>(const Point&, const AxisOrders&)>;

// ---------------------------------------------------------------------------
// Trial transforms. Arguments are jets along one seeded axis.

// ũ(t) = 1 + (1 - e^{-t}) û.
template <class S>
Jet<S> trial_decay(const Jet<S>& uhat, const Jet<S>& t) {
  return S(1.0) + (S(1.0) - exp(-t)) * uhat;
}

// Linear blend of the two boundary values plus x̃(1 - x̃) û, x̃ = (x-lo)/(hi-lo).
template <class S>
Jet<S> trial_dirichlet_1d(const Jet<S>& uhat, const Jet<S>& x, double lo, double hi,
                          double u_lo, double u_hi) {
  if (!(lo < hi)) throw StructuralError("trial_dirichlet_1d: need lo < hi");
  const Jet<S> xt = (x - S(lo)) / S(hi - lo);
  const Jet<S> one_minus = S(1.0) - xt;
  return one_minus * S(u_lo) + xt * S(u_hi) + xt * one_minus * uhat;
}

// ũ(t) = u0 + du0 (1 - e^{-t}) + (1 - e^{-t})^2 û: value and slope at t = 0
// are u0 and du0 regardless of û.
template <class S>
Jet<S> trial_ivp2(const Jet<S>& uhat, const Jet<S>& t, double u0, double du0) {
  const Jet<S> g = S(1.0) - exp(-t);
  return S(u0) + g * S(du0) + g * g * uhat;
}

// Unit square with u(0,y) = sin(pi y) and zero on the other three sides.
template <class S>
Jet<S> trial_dirichlet_2d(const Jet<S>& uhat, const Jet<S>& x, const Jet<S>& y) {
  const Jet<S> one_minus_x = S(1.0) - x;
  return one_minus_x * sin(y * S(std::numbers::pi)) +
         x * one_minus_x * y * (S(1.0) - y) * uhat;
}

// Heat equation on [0, L]: u(x,0) = sin(pi x / L) and Neumann fluxes
// ±(pi/L) e^{-k pi^2 t / L^2} at x = 0 and x = L. flux0_hat and fluxL_hat are
// the network's x-derivative at the two ends, as jets along the same axis as
// the other arguments. The flux mismatch of the unconstrained part is removed
// by a quadratic blend in x.
template <class S>
Jet<S> trial_heat(const Jet<S>& uhat, const Jet<S>& x, const Jet<S>& t,
                  const Jet<S>& flux0_hat, const Jet<S>& fluxL_hat, double k,
                  double length) {
  const double w = std::numbers::pi / length;
  const Jet<S> ramp = S(1.0) - exp(-t);
  const Jet<S> v = sin(x * S(w)) + ramp * uhat;
  // d/dx sin(pi x / L) is w at x = 0 and -w at x = L.
  const Jet<S> v_flux0 = S(w) + ramp * flux0_hat;
  const Jet<S> v_fluxL = S(-w) + ramp * fluxL_hat;
  const Jet<S> decay = exp(t * S(-k * w * w));
  const Jet<S> c0 = decay * S(w) - v_flux0;
  const Jet<S> cL = decay * S(-w) - v_fluxL;
  const Jet<S> q_l = x * x / S(2.0 * length);  // q_l'(0) = 0, q_l'(L) = 1
  const Jet<S> q_0 = x - q_l;                  // q_0'(0) = 1, q_0'(L) = 0
  return v + c0 * q_0 + cL * q_l;
}

// Kuramoto-Sivashinsky on [-40, 40] x [0, 20]: u(x,0) = e^{-x^2}, the factor
// (x+40)(40-x)/40^2 pins both spatial ends.
template <class S>
Jet<S> trial_ks(const Jet<S>& uhat, const Jet<S>& x, const Jet<S>& t) {
  const Jet<S> pin = (x + S(40.0)) * (S(40.0) - x) / S(1600.0);
  return exp(-(x * x)) + (S(1.0) - exp(-t)) * pin * uhat;
}

// ---------------------------------------------------------------------------
// Residuals and closed-form solutions.

template <class S>
S residual(const DeqProblem& prob, const Point& p, const SolutionJets<S>& u);

// Closed-form solution along the seeded axis. Throws StructuralError for
// problems without one.
template <class S>
Jet<S> analytic_jet(const DeqProblem& prob, const std::array<Jet<S>, 2>& coords);
double analytic_value(const DeqProblem& prob, const Point& p);

template <class S>
SolutionFn<S> analytic_solution(const DeqProblem& prob);

// ũ of a network whose parameters are given as scalars of type S.
template <class S>
SolutionFn<S> network_solution(const Network& net, std::span<const S> params,
                               const DeqProblem& prob);

void check_orders(const DeqProblem& prob, const AxisOrders& orders);

// ---------------------------------------------------------------------------
// Collocation and losses.

enum class Sampling { Grid, UniformRandom };

struct CollocationSet {
  std::vector<Point> train_points;
  std::vector<Point> valid_points;
  Sampling sampling = Sampling::Grid;
  std::uint64_t seed = 0;
};

// per_axis equispaced points on each axis, boundaries included.
std::vector<Point> make_grid(const DeqProblem& prob, std::size_t per_axis);
std::vector<Point> make_uniform(const DeqProblem& prob, std::size_t count,
                                std::uint64_t seed);
// Grid training points plus an equal-size uniform-random validation set.
CollocationSet make_collocation(const DeqProblem& prob, std::size_t per_axis,
                                std::uint64_t seed);
// Equispaced evaluation grid: 200 points in 1-D, 50 x 50 in 2-D.
std::vector<Point> test_grid(const DeqProblem& prob);

template <class S>
S residual_loss_of(const DeqProblem& prob, std::span<const Point> pts,
                   const SolutionFn<S>& solution, const AxisOrders& orders);

// Mean squared residual of the trial solution built around net.
double residual_loss(const Network& net, const DeqProblem& prob,
                     std::span<const Point> pts);
double residual_loss(const Network& net, const DeqProblem& prob,
                     const CollocationSet& pts);
double residual_loss(const Network& net, const DeqProblem& prob,
                     std::span<const Point> pts, const AxisOrders& orders);
double residual_loss_and_grad(const Network& net, const DeqProblem& prob,
                              std::span<const Point> pts, std::span<double> grad);

std::vector<double> point_residuals(const Network& net, const DeqProblem& prob,
                                    std::span<const Point> pts);

enum class Reference { Auto, Analytic, Residual };
enum class ErrorMetric { AnalyticMse, ResidualMse };
std::string_view to_string(ErrorMetric m);

struct ErrorReport {
  double value = 0.0;
  ErrorMetric metric = ErrorMetric::AnalyticMse;
};

// MSE against the closed form where one exists, otherwise (or on request)
// the mean squared residual.
ErrorReport eval_error(const DeqProblem& prob, std::span<const Point> grid,
                       const SolutionFn<double>& solution,
                       Reference ref = Reference::Auto);
ErrorReport eval_error(const Network& net, const DeqProblem& prob,
                       std::span<const Point> grid, Reference ref = Reference::Auto);

// coordinates, u, analytic-or-residual reference, point error.
void write_solution_csv(const Network& net, const DeqProblem& prob,
                        std::span<const Point> grid, const std::string& path);

// Residual loss over (minibatches of) the training points; validation loss
// over the validation points.
class ResidualObjective : public Objective {
 public:
  ResidualObjective(DeqProblem prob, CollocationSet points, bool full_batch = false);

  std::size_t sample_count() const override { return points_.train_points.size(); }
  bool full_batch() const override { return full_batch_; }
  double loss_and_grad(const Network& net, std::span<const std::size_t> batch,
                       std::span<double> grad) const override;
  double train_loss(const Network& net) const override;
  double validation_loss(const Network& net) const override;

  const DeqProblem& problem() const { return prob_; }

 private:
  DeqProblem prob_;
  CollocationSet points_;
  bool full_batch_;
};

// ===========================================================================
// Template definitions.

template <class S>
S residual(const DeqProblem& prob, const Point&, const SolutionJets<S>& u) {
  using std::sqrt;
  const Jet<S>& a = u.axis[0];
  const Jet<S>& b = u.axis[1];
  switch (prob.kind) {
    case ProblemKind::Decay:
      return a[1] + a[0];
    case ProblemKind::Catenary:
      return a[2] - sqrt(1.0 + a[1] * a[1]);
    case ProblemKind::Sho:
      return a[2] + a[0];
    case ProblemKind::Damped:
      return a[2] + a[1] + a[0];
    case ProblemKind::Laplace:
      return a[2] + b[2];
    case ProblemKind::Heat:
      return b[1] - prob.heat_k * a[2];
    case ProblemKind::KuramotoSivashinsky:
      return b[1] + a[0] * a[1] + prob.ks_beta * a[2] + prob.ks_gamma * a[4];
  }
  throw StructuralError("residual: unknown problem");
}

template <class S>
Jet<S> analytic_jet(const DeqProblem& prob, const std::array<Jet<S>, 2>& c) {
  constexpr double pi = std::numbers::pi;
  const Jet<S>& x = c[0];
  const Jet<S>& y = c[1];
  switch (prob.kind) {
    case ProblemKind::Decay:
      return exp(-x);
    case ProblemKind::Catenary: {
      const double shift = prob.catenary_boundary - std::cosh(2.0);
      return (exp(x) + exp(-x)) * S(0.5) + S(shift);
    }
    case ProblemKind::Sho:
      return sin(x);
    case ProblemKind::Damped: {
      const double w = std::sqrt(3.0) / 2.0;
      return exp(x * S(-0.5)) * sin(x * S(w)) / S(w);
    }
    case ProblemKind::Laplace: {
      const Jet<S> s = S(pi) * (S(1.0) - x);
      return sin(y * S(pi)) * (exp(s) - exp(-s)) * S(0.5 / std::sinh(pi));
    }
    case ProblemKind::Heat: {
      const double w = pi / prob.heat_length;
      return sin(x * S(w)) * exp(y * S(-prob.heat_k * w * w));
    }
    case ProblemKind::KuramotoSivashinsky:
      break;
  }
  throw StructuralError("problem '" + prob.name + "' has no closed-form solution");
}

namespace detail {

template <class S>
std::array<Jet<S>, 2> seeded_coords(const Point& p, int axis, int order) {
  std::array<Jet<S>, 2> c;
  for (int i = 0; i < 2; ++i) {
    c[static_cast<std::size_t>(i)] =
        i == axis ? Jet<S>::variable(S(p[static_cast<std::size_t>(i)]), order)
                  : Jet<S>::constant(S(p[static_cast<std::size_t>(i)]), order);
  }
  return c;
}

template <class S>
S sum_terms(std::vector<S>& terms) {
  S acc = terms.empty() ? S(0.0) : terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
  return acc;
}

template <>
inline ad::Var sum_terms<ad::Var>(std::vector<ad::Var>& terms) {
  for (const auto& t : terms) {
    if (!t.is_constant()) return t.tape()->sum(terms);
  }
  double v = 0.0;
  for (const auto& t : terms) v += t.value();
  return ad::Var(v);
}

// Network x-derivative at the ends of the heat rod, at time t.
template <class S>
struct HeatFlux {
  S flux0{};
  S flux0_t{};
  S fluxL{};
  S fluxL_t{};
};

}  // namespace detail

template <class S>
SolutionFn<S> analytic_solution(const DeqProblem& prob) {
  if (!prob.has_analytic) {
    throw StructuralError("problem '" + prob.name + "' has no closed-form solution");
  }
  return [prob](const Point& p, const AxisOrders& orders) {
    SolutionJets<S> u;
    for (std::size_t a = 0; a < prob.input_dim; ++a) {
      u.axis[a] = analytic_jet<S>(prob, detail::seeded_coords<S>(p, int(a), orders[a]));
    }
    return u;
  };
}

template <class S>
SolutionFn<S> network_solution(const Network& net, std::span<const S> params,
                               const DeqProblem& prob) {
  if (net.input_dim() != prob.input_dim) {
    throw StructuralError("network input dimension " + std::to_string(net.input_dim()) +
                          " does not match problem '" + prob.name + "'");
  }
  auto eval = [&net, params](const std::array<Jet<S>, 2>& coords, std::size_t dim) {
    return net.forward<Jet<S>, S>(params, std::span<const Jet<S>>(coords.data(), dim));
  };

  if (prob.kind != ProblemKind::Heat) {
    return [prob, eval](const Point& p, const AxisOrders& orders) {
      SolutionJets<S> u;
      for (std::size_t a = 0; a < prob.input_dim; ++a) {
        const auto c = detail::seeded_coords<S>(p, int(a), orders[a]);
        const Jet<S> uhat = eval(c, prob.input_dim);
        switch (prob.kind) {
          case ProblemKind::Decay:
            u.axis[a] = trial_decay(uhat, c[0]);
            break;
          case ProblemKind::Catenary:
            u.axis[a] = trial_dirichlet_1d(uhat, c[0], prob.domain[0].lo, prob.domain[0].hi,
                                           prob.catenary_boundary, prob.catenary_boundary);
            break;
          case ProblemKind::Sho:
          case ProblemKind::Damped:
            u.axis[a] = trial_ivp2(uhat, c[0], 0.0, 1.0);
            break;
          case ProblemKind::Laplace:
            u.axis[a] = trial_dirichlet_2d(uhat, c[0], c[1]);
            break;
          case ProblemKind::KuramotoSivashinsky:
            u.axis[a] = trial_ks(uhat, c[0], c[1]);
            break;
          case ProblemKind::Heat:
            break;
        }
      }
      return u;
    };
  }

  // Heat: the flux correction depends on the network's x-derivative at both
  // ends, and its time derivative on the mixed partial there. The mixed
  // partial comes from second derivatives along x, t and the diagonal:
  // d2/ds2 u(x+s, t+s) = u_xx + 2 u_xt + u_tt. Results are cached per t.
  auto cache = std::make_shared<std::map<double, detail::HeatFlux<S>>>();
  auto flux_at = [eval, cache, length = prob.heat_length](double t) {
    auto it = cache->find(t);
    if (it != cache->end()) return it->second;
    detail::HeatFlux<S> f;
    for (int end = 0; end < 2; ++end) {
      const Point p{end == 0 ? 0.0 : length, t};
      const auto jx = eval(detail::seeded_coords<S>(p, 0, 2), 2);
      const auto jt = eval(detail::seeded_coords<S>(p, 1, 2), 2);
      std::array<Jet<S>, 2> diag = {Jet<S>::variable(S(p[0]), 2),
                                    Jet<S>::variable(S(p[1]), 2)};
      const auto jd = eval(diag, 2);
      const S mixed = (jd[2] - jx[2] - jt[2]) * 0.5;
      (end == 0 ? f.flux0 : f.fluxL) = jx[1];
      (end == 0 ? f.flux0_t : f.fluxL_t) = mixed;
    }
    cache->emplace(t, f);
    return f;
  };

  return [prob, eval, flux_at](const Point& p, const AxisOrders& orders) {
    if (orders[1] > 1) {
      throw StructuralError("heat trial supports time-derivative order <= 1");
    }
    const auto f = flux_at(p[1]);
    SolutionJets<S> u;
    for (std::size_t a = 0; a < 2; ++a) {
      const int order = orders[a];
      const auto c = detail::seeded_coords<S>(p, int(a), order);
      const Jet<S> uhat = eval(c, 2);
      Jet<S> g0 = Jet<S>::constant(f.flux0, order);
      Jet<S> gL = Jet<S>::constant(f.fluxL, order);
      if (a == 1 && order >= 1) {
        g0[1] = f.flux0_t;
        gL[1] = f.fluxL_t;
      }
      u.axis[a] = trial_heat(uhat, c[0], c[1], g0, gL, prob.heat_k, prob.heat_length);
    }
    return u;
  };
}

template <class S>
S residual_loss_of(const DeqProblem& prob, std::span<const Point> pts,
                   const SolutionFn<S>& solution, const AxisOrders& orders) {
  check_orders(prob, orders);
  if (pts.empty()) throw StructuralError("residual loss: no collocation points");
  std::vector<S> terms;
  terms.reserve(pts.size());
  for (const Point& p : pts) {
    const S r = residual<S>(prob, p, solution(p, orders));
    terms.push_back(r * r);
  }
  return detail::sum_terms(terms) * (1.0 / static_cast<double>(pts.size()));
}

}  // namespace gln::deq
