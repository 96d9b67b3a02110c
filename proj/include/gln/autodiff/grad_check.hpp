#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gln::ad {

// A deterministic scalar loss over a flat parameter vector, with its analytic
// gradient.
struct LossEvaluator {
  std::function<double(std::span<const double>)> value;
  std::function<double(std::span<const double>, std::vector<double>&)>
      value_and_grad;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;  // at worst_index
  double numeric = 0.0;   // at worst_index
  double tolerance = 0.0;
  bool passed = true;
};

// Compares the analytic gradient with central differences, one parameter at a
// time. Step is 1e-6 * max(1, |p|); the realized step (p+h) - (p-h) is used
// as the divisor. Relative error is |a - n| / max(|a|, |n|, floor) where
// floor = 1e-5 * max(1, |loss|) absorbs round-off in the loss differences.
GradCheckReport grad_check(std::span<const double> params,
                           const LossEvaluator& loss, double tol);

}  // namespace gln::ad
