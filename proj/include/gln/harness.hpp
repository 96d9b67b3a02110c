#pragma once

// Seeded multi-run experiments: regression on the generated or sunspot data
// sets and fixed-budget differential-equation solves, with run records and
// comparison reports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gln/data.hpp"
#include "gln/network.hpp"
#include "gln/records.hpp"
#include "gln/stats.hpp"
#include "gln/training.hpp"

namespace gln {

enum class TaskKind { Regression, Deq };
enum class Architecture { OneHidden, TwoHidden };

std::string_view to_string(TaskKind t);
std::string_view to_string(Architecture a);
TaskKind parse_task(std::string_view s);
Architecture parse_architecture(std::string_view s);

// Raised for malformed or inconsistent experiment descriptions.
class ConfigError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

struct ExperimentSpec {
  TaskKind task = TaskKind::Regression;
  std::string target = "ees";  // data set (ees, se, sunspot) or problem name
  ModelKind model = ModelKind::Gln;
  Architecture architecture = Architecture::OneHidden;
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 1;
  TrainConfig train{1e-3, 64, 20000, 30, 0, true};

  // Regression data.
  std::size_t points = 2000;
  double lo = -10.0;
  double hi = 10.0;
  std::string data_path;  // sunspot file

  // Differential equations: training points per axis, epoch budget (0 = the
  // problem's own budget) and minibatch size (0 = full batch).
  std::size_t collocation = 32;
  std::size_t epochs = 0;
  std::size_t deq_batch_size = 16;

  bool timing = false;  // record wall_time_s (breaks byte-identical output)

  std::size_t input_dim() const;
  NetworkShape shape() const;
  // Throws ConfigError describing the first inconsistency.
  void validate() const;
};

// Flat INI text with [experiment], [data], [train] and [deq] sections.
ExperimentSpec parse_spec(const std::string& text, const std::string& source = "<config>");
ExperimentSpec load_spec(const std::string& path);
std::string spec_to_ini(const ExperimentSpec& spec);

// One repetition with the given seed (init, split and shuffling).
RunRecord run_single(const ExperimentSpec& spec, std::uint64_t seed);

// Repetition i uses seed base_seed + i. Records come back ordered by i
// regardless of the number of worker threads.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, std::size_t jobs = 1);

// Trained network and full outcome of a single differential-equation solve.
struct SolveResult {
  TrainOutcome outcome;
  RunRecord record;
};
SolveResult solve(const ExperimentSpec& spec, std::uint64_t seed);

struct CompareReport {
  std::string label_a;
  std::string label_b;
  std::string metric;
  stats::KsResult ks;
  stats::SampleStats stats_a;
  stats::SampleStats stats_b;
  std::size_t failed_a = 0;
  std::size_t failed_b = 0;
};

// KS comparison of two record sets on test_mse or epochs_run. Failed runs are
// excluded and counted.
CompareReport compare(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b,
                      const std::string& metric);

// "model:architecture" of the first record.
std::string records_label(const std::vector<RunRecord>& records);

// model_a,model_b,metric,D,p,reject
std::string ks_csv_header();
std::string ks_csv_row(const CompareReport& r);

// One row per (task, target, model, architecture) group; groups with fewer
// than two successful runs get NA statistics.
std::string stats_csv(const std::vector<RunRecord>& records, const std::string& metric);
// layer,n,min,max,mean,median,std,cv
std::string alphas_csv(const std::vector<stats::LayerAlphaStats>& layers);

}  // namespace gln
