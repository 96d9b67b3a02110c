#include "gln/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gln/error.hpp"

namespace gln::stats {

SampleStats describe(std::span<const double> sample) {
  if (sample.size() < 2) {
    throw StructuralError("describe: need at least 2 values, got " +
                          std::to_string(sample.size()));
  }
  std::vector<double> v(sample.begin(), sample.end());
  for (double x : v) {
    if (!std::isfinite(x)) throw StructuralError("describe: non-finite value");
  }
  std::sort(v.begin(), v.end());
  SampleStats s;
  s.n = v.size();
  s.min = v.front();
  s.max = v.back();
  const std::size_t h = s.n / 2;
  s.median = s.n % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);

  // Sorted order makes the sums independent of the input permutation.
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  if (s.mean != 0.0) s.cv = s.std / s.mean;
  return s;
}

double kolmogorov_q(double lambda) {
  // Q(0.2) = 1 - 3e-22; below that the series converges slowly and the true
  // value rounds to 1.
  if (!(lambda >= 0.2)) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw StructuralError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  for (double v : x) {
    if (std::isnan(v)) throw StructuralError("ks_two_sample: NaN in first sample");
  }
  for (double v : y) {
    if (std::isnan(v)) throw StructuralError("ks_two_sample: NaN in second sample");
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());

  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Step both ECDFs past every copy of the next distinct value, then compare.
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  KsResult r;
  r.n1 = x.size();
  r.n2 = y.size();
  r.d_statistic = d;
  const double ne = n1 * n2 / (n1 + n2);
  const double root = std::sqrt(ne);
  r.p_value = kolmogorov_q(d * (root + 0.12 + 0.11 / root));
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

std::vector<double> metric_values(std::span<const RunRecord> runs,
                                  const std::string& metric) {
  if (metric != "test_mse" && metric != "epochs_run") {
    throw StructuralError("unknown metric '" + metric + "' (expected test_mse or epochs_run)");
  }
  std::vector<double> out;
  for (const RunRecord& r : runs) {
    if (r.failed()) continue;
    out.push_back(metric == "test_mse" ? r.test_mse : static_cast<double>(r.epochs_run));
  }
  return out;
}

std::vector<LayerAlphaStats> alpha_summary(std::span<const RunRecord> runs) {
  if (runs.empty()) throw StructuralError("alpha_summary: no runs");
  const RunRecord& first = runs.front();
  std::vector<std::vector<double>> per_layer;
  for (const RunRecord& r : runs) {
    if (r.model != first.model || r.architecture != first.architecture ||
        r.task != first.task || r.dataset_or_problem != first.dataset_or_problem) {
      throw StructuralError("alpha_summary: runs mix experiments (" + first.model + "/" +
                            first.architecture + " vs " + r.model + "/" + r.architecture +
                            ")");
    }
    if (r.failed()) continue;
    if (per_layer.empty()) per_layer.resize(r.alphas.size());
    if (r.alphas.size() != per_layer.size()) {
      throw StructuralError("alpha_summary: runs disagree on the number of GLN layers");
    }
    for (std::size_t l = 0; l < r.alphas.size(); ++l) per_layer[l].push_back(r.alphas[l]);
  }
  if (per_layer.empty()) {
    throw StructuralError("alpha_summary: runs carry no alpha values (model " +
                          first.model + ")");
  }
  std::vector<LayerAlphaStats> out;
  for (std::size_t l = 0; l < per_layer.size(); ++l) {
    out.push_back({l + 1, describe(per_layer[l])});
  }
  return out;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : "NA";
}

}  // namespace gln::stats
