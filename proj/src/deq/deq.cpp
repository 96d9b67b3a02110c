#include "gln/deq.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

#include "gln/autodiff/tape.hpp"
#include "gln/error.hpp"

namespace gln::deq {

DeqProblem make_problem(ProblemKind kind) {
  constexpr double pi = std::numbers::pi;
  DeqProblem p;
  p.kind = kind;
  switch (kind) {
    case ProblemKind::Decay:
      p.name = "decay";
      p.axis_names = {"t", ""};
      p.domain[0] = {0.0, 3.0};
      p.max_order = {1, 0};
      p.epochs = 500;
      break;
    case ProblemKind::Catenary:
      p.name = "catenary";
      p.axis_names = {"x", ""};
      p.domain[0] = {-2.0, 2.0};
      p.max_order = {2, 0};
      p.epochs = 700;
      break;
    case ProblemKind::Sho:
      p.name = "sho";
      p.axis_names = {"t", ""};
      p.domain[0] = {0.0, 3.0 * pi};
      p.max_order = {2, 0};
      p.epochs = 700;
      break;
    case ProblemKind::Damped:
      p.name = "damped";
      p.axis_names = {"t", ""};
      p.domain[0] = {0.0, 6.0 * pi};
      p.max_order = {2, 0};
      p.epochs = 1000;
      break;
    case ProblemKind::Laplace:
      p.name = "laplace";
      p.input_dim = 2;
      p.axis_names = {"x", "y"};
      p.domain = {Interval{0.0, 1.0}, Interval{0.0, 1.0}};
      p.max_order = {2, 2};
      p.epochs = 300;
      break;
    case ProblemKind::Heat:
      p.name = "heat";
      p.input_dim = 2;
      p.axis_names = {"x", "t"};
      p.domain = {Interval{0.0, p.heat_length}, Interval{0.0, 2.0}};
      p.max_order = {2, 1};
      p.epochs = 300;
      break;
    case ProblemKind::KuramotoSivashinsky:
      p.name = "ks";
      p.input_dim = 2;
      p.axis_names = {"x", "t"};
      p.domain = {Interval{-40.0, 40.0}, Interval{0.0, 20.0}};
      p.max_order = {4, 1};
      p.epochs = 1500;
      p.has_analytic = false;
      break;
  }
  if (p.input_dim == 1) p.domain[1] = {0.0, 0.0};
  return p;
}

const std::vector<ProblemKind>& all_problem_kinds() {
  static const std::vector<ProblemKind> kinds = {
      ProblemKind::Decay,   ProblemKind::Catenary, ProblemKind::Sho,
      ProblemKind::Damped,  ProblemKind::Laplace,  ProblemKind::Heat,
      ProblemKind::KuramotoSivashinsky};
  return kinds;
}

DeqProblem problem_by_name(std::string_view name) {
  for (ProblemKind k : all_problem_kinds()) {
    DeqProblem p = make_problem(k);
    if (p.name == name) return p;
  }
  throw StructuralError("unknown problem '" + std::string(name) +
                        "' (expected decay, catenary, sho, damped, laplace, heat or ks)");
}

void check_orders(const DeqProblem& prob, const AxisOrders& orders) {
  for (std::size_t a = 0; a < prob.input_dim; ++a) {
    if (orders[a] < prob.max_order[a] || orders[a] > ad::kMaxJetOrder) {
      throw StructuralError("problem '" + prob.name + "' needs jet order " +
                            std::to_string(prob.max_order[a]) + " along " +
                            prob.axis_names[a] + ", got " + std::to_string(orders[a]));
    }
  }
}

double analytic_value(const DeqProblem& prob, const Point& p) {
  const auto c = detail::seeded_coords<double>(p, 0, 0);
  return analytic_jet<double>(prob, c)[0];
}

// ---------------------------------------------------------------------------

std::vector<Point> make_grid(const DeqProblem& prob, std::size_t per_axis) {
  if (per_axis < 2) throw StructuralError("make_grid: need at least 2 points per axis");
  auto axis = [per_axis](const Interval& iv) {
    std::vector<double> v(per_axis);
    const double step = (iv.hi - iv.lo) / static_cast<double>(per_axis - 1);
    for (std::size_t i = 0; i < per_axis; ++i) {
      v[i] = i + 1 == per_axis ? iv.hi : iv.lo + step * static_cast<double>(i);
    }
    return v;
  };
  const auto xs = axis(prob.domain[0]);
  std::vector<Point> out;
  if (prob.input_dim == 1) {
    for (double x : xs) out.push_back({x, 0.0});
    return out;
  }
  const auto ys = axis(prob.domain[1]);
  out.reserve(xs.size() * ys.size());
  for (double x : xs) {
    for (double y : ys) out.push_back({x, y});
  }
  return out;
}

std::vector<Point> make_uniform(const DeqProblem& prob, std::size_t count,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out(count, Point{0.0, 0.0});
  for (std::size_t a = 0; a < prob.input_dim; ++a) {
    const Interval iv = prob.domain[a];
    std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
    for (Point& p : out) p[a] = dist(rng);
  }
  return out;
}

CollocationSet make_collocation(const DeqProblem& prob, std::size_t per_axis,
                                std::uint64_t seed) {
  CollocationSet s;
  s.train_points = make_grid(prob, per_axis);
  s.valid_points = make_uniform(prob, s.train_points.size(), seed);
  s.sampling = Sampling::Grid;
  s.seed = seed;
  return s;
}

std::vector<Point> test_grid(const DeqProblem& prob) {
  return make_grid(prob, prob.input_dim == 1 ? 200 : 50);
}

// ---------------------------------------------------------------------------

double residual_loss(const Network& net, const DeqProblem& prob,
                     std::span<const Point> pts, const AxisOrders& orders) {
  const auto u = network_solution<double>(net, net.params(), prob);
  return residual_loss_of<double>(prob, pts, u, orders);
}

double residual_loss(const Network& net, const DeqProblem& prob,
                     std::span<const Point> pts) {
  return residual_loss(net, prob, pts, prob.max_order);
}

double residual_loss(const Network& net, const DeqProblem& prob,
                     const CollocationSet& pts) {
  return residual_loss(net, prob, pts.train_points);
}

double residual_loss_and_grad(const Network& net, const DeqProblem& prob,
                              std::span<const Point> pts, std::span<double> grad) {
  if (grad.size() != net.param_count()) {
    throw StructuralError("residual_loss_and_grad: gradient length mismatch");
  }
  ad::Tape tape;
  const std::vector<ad::Var> vars = tape.variables(net.params());
  const auto u = network_solution<ad::Var>(net, std::span<const ad::Var>(vars), prob);
  const ad::Var loss = residual_loss_of<ad::Var>(prob, pts, u, prob.max_order);
  if (!std::isfinite(loss.value())) return loss.value();
  const ad::ParamGrad g = ad::grad(loss, vars);
  std::copy(g.values.begin(), g.values.end(), grad.begin());
  return loss.value();
}

std::vector<double> point_residuals(const Network& net, const DeqProblem& prob,
                                    std::span<const Point> pts) {
  const auto u = network_solution<double>(net, net.params(), prob);
  std::vector<double> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back(residual<double>(prob, p, u(p, prob.max_order)));
  return out;
}

std::string_view to_string(ErrorMetric m) {
  return m == ErrorMetric::AnalyticMse ? "analytic_mse" : "residual_mse";
}

ErrorReport eval_error(const DeqProblem& prob, std::span<const Point> grid,
                       const SolutionFn<double>& solution, Reference ref) {
  if (grid.empty()) throw StructuralError("eval_error: empty grid");
  if (ref == Reference::Auto) {
    ref = prob.has_analytic ? Reference::Analytic : Reference::Residual;
  }
  ErrorReport r;
  if (ref == Reference::Residual) {
    r.metric = ErrorMetric::ResidualMse;
    r.value = residual_loss_of<double>(prob, grid, solution, prob.max_order);
    return r;
  }
  if (!prob.has_analytic) {
    throw StructuralError("eval_error: problem '" + prob.name +
                          "' has no closed-form solution");
  }
  r.metric = ErrorMetric::AnalyticMse;
  double sum = 0.0;
  for (const Point& p : grid) {
    const double d = solution(p, {0, 0}).value() - analytic_value(prob, p);
    sum += d * d;
  }
  r.value = sum / static_cast<double>(grid.size());
  return r;
}

ErrorReport eval_error(const Network& net, const DeqProblem& prob,
                       std::span<const Point> grid, Reference ref) {
  return eval_error(prob, grid, network_solution<double>(net, net.params(), prob), ref);
}

void write_solution_csv(const Network& net, const DeqProblem& prob,
                        std::span<const Point> grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  const auto u = network_solution<double>(net, net.params(), prob);
  const bool analytic = prob.has_analytic;
  out << prob.axis_names[0];
  if (prob.input_dim == 2) out << ',' << prob.axis_names[1];
  out << ",u," << (analytic ? "analytic" : "residual") << ",error\n";
  char buf[160];
  for (const Point& p : grid) {
    double value = 0.0;
    double reference = 0.0;
    double error = 0.0;
    if (analytic) {
      value = u(p, {0, 0}).value();
      reference = analytic_value(prob, p);
      error = value - reference;
    } else {
      const auto jets = u(p, prob.max_order);
      value = jets.value();
      reference = residual<double>(prob, p, jets);
      error = reference;
    }
    if (prob.input_dim == 2) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p[0], p[1],
                    value, reference, error);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p[0], value,
                    reference, error);
    }
    out << buf;
  }
}

// ---------------------------------------------------------------------------

ResidualObjective::ResidualObjective(DeqProblem prob, CollocationSet points,
                                     bool full_batch)
    : prob_(std::move(prob)), points_(std::move(points)), full_batch_(full_batch) {
  if (points_.train_points.empty() || points_.valid_points.empty()) {
    throw StructuralError("residual objective: empty collocation set");
  }
}

double ResidualObjective::loss_and_grad(const Network& net,
                                        std::span<const std::size_t> batch,
                                        std::span<double> grad) const {
  std::vector<Point> pts;
  pts.reserve(batch.size());
  for (std::size_t i : batch) pts.push_back(points_.train_points.at(i));
  return residual_loss_and_grad(net, prob_, pts, grad);
}

double ResidualObjective::train_loss(const Network& net) const {
  return residual_loss(net, prob_, points_.train_points);
}

double ResidualObjective::validation_loss(const Network& net) const {
  return residual_loss(net, prob_, points_.valid_points);
}

}  // namespace gln::deq
