#include "checks.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gln/autodiff/grad_check.hpp"
#include "gln/data.hpp"
#include "support.hpp"

namespace gln::testkit {
namespace {

NetworkShape shape_of(Architecture arch, std::size_t input_dim) {
  return arch == Architecture::OneHidden ? NetworkShape::one_hidden(input_dim)
                                         : NetworkShape::two_hidden(input_dim);
}

std::string label(ModelKind m, Architecture a) {
  return std::string(to_string(m)) + "/" + std::string(to_string(a));
}

void set_gates(Network& net, double z) {
  auto p = net.params();
  for (const auto& layer : net.branches()[0]) {
    p[layer.gate_offset()] = z;
    p[layer.gate_offset() + 1] = 0.0;
  }
}

}  // namespace

Worst degeneracy(Architecture arch, std::size_t networks, std::size_t inputs,
                 std::uint64_t seed) {
  Worst w;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (std::size_t n = 0; n < networks; ++n) {
    Network gln = random_network(shape_of(arch, 1), ModelKind::Gln, seed + n);
    for (const auto& [z, kind] : {std::pair{20.0, ModelKind::Sin}, {-20.0, ModelKind::Tanh}}) {
      set_gates(gln, z);
      Network mlp(gln.shape(), kind);
      copy_dense(gln, mlp);
      for (std::size_t i = 0; i < inputs; ++i) {
        const double x = dist(rng);
        w.update(std::abs(gln(x) - mlp(x)), std::string(to_string(kind)) + " net " +
                                                 std::to_string(n) + " x=" + std::to_string(x));
      }
    }
  }
  return w;
}

Worst mse_gradient(ModelKind model, Architecture arch, std::uint64_t seed) {
  const Network net = random_network(shape_of(arch, 1), model, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::vector<double> xs(16);
  std::vector<double> ys(16);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = dist(rng);
    ys[i] = data::ees(xs[i]);
  }
  ad::LossEvaluator ev{
      [&](std::span<const double> p) {
        std::vector<double> g(p.size());
        return batch_mse_and_grad(net.with_params(p), xs, ys, g);
      },
      [&](std::span<const double> p, std::vector<double>& g) {
        g.assign(p.size(), 0.0);
        return batch_mse_and_grad(net.with_params(p), xs, ys, g);
      }};
  const auto r = ad::grad_check(net.params(), ev, 1.0);
  Worst w;
  w.update(r.max_rel_error, label(model, arch) + " param " + std::to_string(r.worst_index));
  return w;
}

Worst residual_gradient(deq::ProblemKind problem, ModelKind model, std::uint64_t seed) {
  const auto prob = deq::make_problem(problem);
  const Network net =
      random_network(NetworkShape::one_hidden(prob.input_dim), model, seed);
  const auto pts = deq::make_uniform(prob, prob.input_dim == 1 ? 8 : 6, seed);
  ad::LossEvaluator ev{
      [&](std::span<const double> p) {
        return deq::residual_loss(net.with_params(p), prob, pts);
      },
      [&](std::span<const double> p, std::vector<double>& g) {
        g.assign(p.size(), 0.0);
        return deq::residual_loss_and_grad(net.with_params(p), prob, pts, g);
      }};
  const auto r = ad::grad_check(net.params(), ev, 1.0);
  Worst w;
  w.update(r.max_rel_error, prob.name + " " + std::string(to_string(model)) + " param " +
                                std::to_string(r.worst_index));
  return w;
}

Worst jet_vs_fd(ModelKind model, Architecture arch, std::size_t input_dim, int order,
                std::size_t networks, std::size_t points, std::uint64_t seed) {
  using J = ad::Jet<double>;
  Worst w;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (std::size_t n = 0; n < networks; ++n) {
    const Network net = random_network(shape_of(arch, input_dim), model, seed + n);
    for (std::size_t i = 0; i < points; ++i) {
      std::vector<double> x(input_dim);
      for (double& v : x) v = dist(rng);
      for (std::size_t axis = 0; axis < input_dim; ++axis) {
        std::vector<J> jin;
        for (std::size_t d = 0; d < input_dim; ++d) {
          jin.push_back(d == axis ? J::variable(x[d], order) : J::constant(x[d], order));
        }
        const J out = net.forward<J, double>(net.params(), jin);
        auto f = [&](long double s) {
          std::vector<long double> in(x.begin(), x.end());
          in[axis] = s;
          return forward_ld(net, in);
        };
        const double fd = static_cast<double>(central_difference(f, x[axis], order));
        w.update(rel_error(out[order], fd, 1e-3),
                 label(model, arch) + " order " + std::to_string(order) + " axis " +
                     std::to_string(axis));
      }
    }
  }
  return w;
}

Worst trial_conditions(deq::ProblemKind problem, std::size_t networks, std::uint64_t seed) {
  using deq::ProblemKind;
  constexpr double pi = std::numbers::pi;
  const auto prob = deq::make_problem(problem);
  const ModelKind kinds[] = {ModelKind::Gln, ModelKind::Sin, ModelKind::Tanh, ModelKind::Tbn};
  Worst w;
  for (std::size_t n = 0; n < networks; ++n) {
    const ModelKind kind = kinds[n % 4];
    const Architecture arch = n % 8 < 4 ? Architecture::OneHidden : Architecture::TwoHidden;
    const Network net = random_network(shape_of(arch, prob.input_dim), kind, seed + n);
    const auto u = deq::network_solution<double>(net, net.params(), prob);
    const std::string tag = prob.name + " net " + std::to_string(n) + " ";
    auto value = [&](double a, double b) { return u({a, b}, {0, 0}).value(); };
    auto slope = [&](double a, double b, int axis) {
      deq::AxisOrders o{0, 0};
      o[static_cast<std::size_t>(axis)] = 1;
      return u({a, b}, o).axis[static_cast<std::size_t>(axis)][1];
    };
    const auto& d0 = prob.domain[0];
    const auto& d1 = prob.domain[1];
    switch (problem) {
      case ProblemKind::Decay:
        w.update(std::abs(value(0.0, 0.0) - 1.0), tag + "u(0)");
        break;
      case ProblemKind::Catenary:
        w.update(std::abs(value(d0.lo, 0.0) - prob.catenary_boundary), tag + "u(lo)");
        w.update(std::abs(value(d0.hi, 0.0) - prob.catenary_boundary), tag + "u(hi)");
        break;
      case ProblemKind::Sho:
      case ProblemKind::Damped:
        w.update(std::abs(value(0.0, 0.0)), tag + "u(0)");
        w.update(std::abs(slope(0.0, 0.0, 0) - 1.0), tag + "u'(0)");
        break;
      case ProblemKind::Laplace:
        for (int i = 0; i <= 10; ++i) {
          const double s = i / 10.0;
          w.update(std::abs(value(0.0, s) - std::sin(pi * s)), tag + "u(0,y)");
          w.update(std::abs(value(1.0, s)), tag + "u(1,y)");
          w.update(std::abs(value(s, 0.0)), tag + "u(x,0)");
          w.update(std::abs(value(s, 1.0)), tag + "u(x,1)");
        }
        break;
      case ProblemKind::Heat: {
        const double L = prob.heat_length;
        const double k = prob.heat_k;
        for (int i = 0; i <= 10; ++i) {
          const double x = L * i / 10.0;
          const double t = d1.hi * i / 10.0;
          const double flux = pi / L * std::exp(-k * pi * pi * t / (L * L));
          w.update(std::abs(value(x, 0.0) - std::sin(pi * x / L)), tag + "u(x,0)");
          w.update(std::abs(slope(0.0, t, 0) - flux), tag + "u_x(0,t)");
          w.update(std::abs(slope(L, t, 0) + flux), tag + "u_x(L,t)");
        }
        break;
      }
      case ProblemKind::KuramotoSivashinsky:
        for (int i = 0; i <= 10; ++i) {
          const double x = d0.lo + (d0.hi - d0.lo) * i / 10.0;
          const double t = d1.hi * i / 10.0;
          w.update(std::abs(value(x, 0.0) - std::exp(-x * x)), tag + "u(x,0)");
          w.update(std::abs(value(d0.lo, t)), tag + "u(lo,t)");
          w.update(std::abs(value(d0.hi, t)), tag + "u(hi,t)");
        }
        break;
    }
  }
  return w;
}

Worst analytic_residual(deq::ProblemKind problem, std::size_t points, std::uint64_t seed) {
  const auto prob = deq::make_problem(problem);
  const auto u = deq::analytic_solution<double>(prob);
  Worst w;
  for (const auto& p : deq::make_uniform(prob, points, seed)) {
    const double r = deq::residual<double>(prob, p, u(p, prob.max_order));
    w.update(std::abs(r), prob.name + " at (" + std::to_string(p[0]) + ", " +
                              std::to_string(p[1]) + ")");
  }
  return w;
}

}  // namespace gln::testkit
