#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gln {

// Status values written to the status column.
inline constexpr const char* kStatusOk = "ok";
// Differential-equation runs train for a fixed budget; epochs_run is that
// budget, not an early-stopping epoch.
inline constexpr const char* kStatusFixedBudget = "ok_fixed_budget";
// As above, with test_mse holding the mean squared residual (no closed form).
inline constexpr const char* kStatusFixedBudgetResidual = "ok_fixed_budget_residual_mse";
inline constexpr const char* kStatusFailed = "failed_nonfinite";

// One training run of an experiment.
struct RunRecord {
  std::string task;                // regression | deq
  std::string dataset_or_problem;  // ees, se, sunspot, decay, ...
  std::string model;               // gln | sin | tanh | tbn
  std::string architecture;        // one_hidden | two_hidden
  std::uint64_t seed = 0;
  double test_mse = 0.0;
  std::uint64_t epochs_run = 0;
  std::vector<double> alphas;       // per hidden layer, empty unless gln
  std::optional<double> wall_time;  // seconds; absent unless timing requested
  std::string status = kStatusOk;

  bool failed() const { return status == kStatusFailed; }

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Header: task, dataset_or_problem, model, architecture, seed, test_mse,
// epochs_run, alpha_1, alpha_2, wall_time_s, status. Reals use %.17g so the
// file reads back bit for bit; missing values are written as NA.
std::string run_records_csv(const std::vector<RunRecord>& records);
void write_run_records(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> parse_run_records(const std::string& text,
                                         const std::string& source = "<input>");
std::vector<RunRecord> read_run_records(const std::string& path);

}  // namespace gln
