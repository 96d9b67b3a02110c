#include "gln/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gln::ad {

GradCheckReport grad_check(std::span<const double> params,
                           const LossEvaluator& loss, double tol) {
  std::vector<double> p(params.begin(), params.end());
  std::vector<double> analytic;
  const double l0 = loss.value_and_grad(p, analytic);
  const double floor = 1e-5 * std::max(1.0, std::abs(l0));

  GradCheckReport report;
  report.tolerance = tol;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    const double h = 1e-6 * std::max(1.0, std::abs(orig));
    const double xp = orig + h;
    const double xm = orig - h;
    p[i] = xp;
    const double lp = loss.value(p);
    p[i] = xm;
    const double lm = loss.value(p);
    p[i] = orig;

    const double numeric = (lp - lm) / (xp - xm);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), floor});
    double rel = std::abs(a - numeric) / denom;
    if (!std::isfinite(rel)) rel = std::numeric_limits<double>::infinity();
    if (i == 0 || rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_index = i;
      report.analytic = a;
      report.numeric = numeric;
    }
  }
  report.passed = report.max_rel_error <= tol;
  return report;
}

}  // namespace gln::ad
