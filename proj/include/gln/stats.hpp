#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gln/records.hpp"

namespace gln::stats {

struct SampleStats {
  std::size_t n = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;          // n - 1 denominator
  std::optional<double> cv;  // std / mean; empty when mean == 0
};

// Throws StructuralError when n < 2 or a value is not finite.
SampleStats describe(std::span<const double> sample);

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool reject_at_5pct = false;
};

// Two-sample Kolmogorov-Smirnov test. D is the largest ECDF gap over the
// distinct pooled values; p comes from the asymptotic Kolmogorov series with
// lambda = D (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)), ne = n1 n2 / (n1 + n2).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2),
// clamped to [0, 1].
double kolmogorov_q(double lambda);

struct LayerAlphaStats {
  std::size_t layer = 0;  // 1-based
  SampleStats stats;
};

// Per hidden layer statistics of the recorded alphas. Failed runs are
// skipped. Runs must share model and architecture.
std::vector<LayerAlphaStats> alpha_summary(std::span<const RunRecord> runs);

// Values of a RunRecord metric (test_mse or epochs_run) over successful runs.
std::vector<double> metric_values(std::span<const RunRecord> runs,
                                  const std::string& metric);

std::string format_real(double v);
std::string format_optional(const std::optional<double>& v);

}  // namespace gln::stats
