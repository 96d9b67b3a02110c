// glnlab: command-line front end for data generation, experiment batches,
// statistics and single differential-equation solves.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error (bad flag, missing
// file, invalid experiment description).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gln/data.hpp"
#include "gln/deq.hpp"
#include "gln/error.hpp"
#include "gln/harness.hpp"
#include "gln/stats.hpp"

namespace {

using namespace gln;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

struct GenDataArgs {
  std::string set = "ees";
  std::size_t n = 2000;
  double lo = -10.0;
  double hi = 10.0;
  std::string input;
  std::string out;
};

int gen_data(const GenDataArgs& a) {
  std::vector<data::Sample> samples;
  if (a.set == "ees") {
    samples = data::sample_domain(a.n, a.lo, a.hi, [](double x) { return data::ees(x); });
  } else if (a.set == "se") {
    samples = data::sample_domain(a.n, a.lo, a.hi, [](double x) { return data::se(x); });
  } else {
    if (a.input.empty()) throw UsageError("gen-data --set sunspot needs --input");
    const auto file = data::load_sunspot(a.input);
    if (file.skipped_missing > 0) {
      std::fprintf(stderr, "skipped %zu records with missing counts\n", file.skipped_missing);
    }
    samples = data::normalize_sunspot(file.records).samples;
  }
  data::write_samples_csv(samples, a.out);
  std::printf("wrote %zu rows to %s\n", samples.size(), a.out.c_str());
  return 0;
}

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> max_epochs;
  std::size_t jobs = 1;
  bool timing = false;
};

void summarize(const std::vector<RunRecord>& records) {
  const auto ok = stats::metric_values(records, "test_mse");
  std::printf("%zu runs, %zu failed\n", records.size(), records.size() - ok.size());
  if (ok.size() >= 2) {
    const auto s = stats::describe(ok);
    std::printf("test_mse median %.6g mean %.6g min %.6g max %.6g\n", s.median, s.mean, s.min,
                s.max);
  } else if (ok.size() == 1) {
    std::printf("test_mse %.6g\n", ok[0]);
  }
}

int run(const RunArgs& a) {
  ExperimentSpec spec = load_spec(a.config);
  if (a.seed) spec.base_seed = *a.seed;
  if (a.reps) spec.repetitions = *a.reps;
  if (a.max_epochs) {
    if (spec.task == TaskKind::Regression) {
      spec.train.max_epochs = *a.max_epochs;
    } else {
      spec.epochs = *a.max_epochs;
    }
  }
  spec.timing = a.timing;
  spec.validate();
  const auto records = run_experiment(spec, a.jobs);
  write_run_records(records, a.out);
  summarize(records);
  return 0;
}

struct StatsArgs {
  std::string in;
  std::string metric = "test_mse";
  std::string out;
};

int stats_cmd(const StatsArgs& a) {
  const auto records = read_run_records(a.in);
  const std::string text = stats_csv(records, a.metric);
  std::fputs(text.c_str(), stdout);
  if (!a.out.empty()) write_text(a.out, text);
  return 0;
}

struct KsArgs {
  std::string a;
  std::string b;
  std::string metric = "test_mse";
  std::string out;
};

int ks_cmd(const KsArgs& k) {
  const auto report = compare(read_run_records(k.a), read_run_records(k.b), k.metric);
  std::printf("%s vs %s on %s: D = %.6g, p = %.6g, %s\n", report.label_a.c_str(),
              report.label_b.c_str(), report.metric.c_str(), report.ks.d_statistic,
              report.ks.p_value,
              report.ks.reject_at_5pct ? "distributions differ at 5%" : "similar at 5%");
  if (report.failed_a + report.failed_b > 0) {
    std::printf("excluded failed runs: %zu and %zu\n", report.failed_a, report.failed_b);
  }
  if (!k.out.empty()) write_text(k.out, ks_csv_header() + "\n" + ks_csv_row(report) + "\n");
  return 0;
}

struct SolveArgs {
  std::string config;
  std::string problem;
  std::string model = "gln";
  std::string architecture = "one_hidden";
  std::uint64_t seed = 1;
  std::optional<std::size_t> epochs;
  std::size_t collocation = 32;
  std::optional<std::size_t> batch_size;
  std::string out;
  std::string network;
  std::string history;
};

int solve_cmd(const SolveArgs& a) {
  ExperimentSpec spec;
  if (!a.config.empty()) {
    spec = load_spec(a.config);
  } else {
    if (a.problem.empty()) throw UsageError("solve needs --problem or --config");
    spec.task = TaskKind::Deq;
    spec.target = a.problem;
    spec.model = parse_model_kind(a.model);
    spec.architecture = parse_architecture(a.architecture);
    spec.collocation = a.collocation;
  }
  if (a.epochs) spec.epochs = *a.epochs;
  if (a.batch_size) spec.deq_batch_size = *a.batch_size;
  spec.validate();
  const auto result = solve(spec, a.seed);
  const auto prob = deq::problem_by_name(spec.target);
  const Network& net = result.outcome.best_net;
  if (result.record.failed()) {
    std::fprintf(stderr, "training failed: %s\n", result.outcome.message.c_str());
    return 1;
  }
  const auto err = deq::eval_error(net, prob, deq::test_grid(prob));
  std::printf("%s: %zu epochs, best epoch %zu, %s %.6g\n", prob.name.c_str(),
              result.outcome.epochs_run, result.outcome.best_epoch,
              std::string(deq::to_string(err.metric)).c_str(), err.value);
  for (const auto& alpha : net.alpha_values()) {
    std::printf("alpha layer %zu: %.6f\n", alpha.layer, alpha.alpha);
  }
  if (!a.out.empty()) deq::write_solution_csv(net, prob, deq::test_grid(prob), a.out);
  if (!a.network.empty()) save_network(net, a.network);
  if (!a.history.empty()) write_loss_history(result.outcome, a.history);
  return 0;
}

struct AlphasArgs {
  std::string in;
  std::string out;
};

int alphas_cmd(const AlphasArgs& a) {
  const auto records = read_run_records(a.in);
  const std::string text = alphas_csv(stats::alpha_summary(records));
  std::fputs(text.c_str(), stdout);
  if (!a.out.empty()) write_text(a.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global-Local Neuron lab"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Sample a generator or normalize sunspot data");
  gen_cmd->add_option("--set", gen.set, "ees, se or sunspot")
      ->check(CLI::IsMember({"ees", "se", "sunspot"}));
  gen_cmd->add_option("--n", gen.n, "Number of equispaced points")->check(CLI::Range(2, 100000000));
  gen_cmd->add_option("--lo", gen.lo);
  gen_cmd->add_option("--hi", gen.hi);
  gen_cmd->add_option("--input", gen.input, "Sunspot file")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment batch");
  run_cmd->add_option("--config", run_args.config)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_args.out, "RunRecord CSV")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override base seed");
  run_cmd->add_option("--reps", run_args.reps, "Override repetitions")->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-epochs", run_args.max_epochs,
                      "Override the epoch cap (regression) or budget (deq)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--jobs", run_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--timing", run_args.timing, "Record wall_time_s");

  StatsArgs stats_args;
  auto* stats_sub = app.add_subcommand("stats", "Descriptive statistics of run records");
  stats_sub->add_option("--in", stats_args.in)->required()->check(CLI::ExistingFile);
  stats_sub->add_option("--metric", stats_args.metric)
      ->check(CLI::IsMember({"test_mse", "epochs_run"}));
  stats_sub->add_option("--out", stats_args.out);

  KsArgs ks_args;
  auto* ks_sub = app.add_subcommand("ks", "Two-sample KS comparison of two record files");
  ks_sub->add_option("--a", ks_args.a)->required()->check(CLI::ExistingFile);
  ks_sub->add_option("--b", ks_args.b)->required()->check(CLI::ExistingFile);
  ks_sub->add_option("--metric", ks_args.metric)->check(CLI::IsMember({"test_mse", "epochs_run"}));
  ks_sub->add_option("--out", ks_args.out);

  SolveArgs solve_args;
  auto* solve_sub = app.add_subcommand("solve", "Train one network on a differential equation");
  solve_sub->add_option("--config", solve_args.config)->check(CLI::ExistingFile);
  solve_sub->add_option("--problem", solve_args.problem,
                        "decay, catenary, sho, damped, laplace, heat or ks");
  solve_sub->add_option("--model", solve_args.model)
      ->check(CLI::IsMember({"gln", "sin", "tanh", "tbn"}));
  solve_sub->add_option("--architecture", solve_args.architecture)
      ->check(CLI::IsMember({"one_hidden", "two_hidden"}));
  solve_sub->add_option("--seed", solve_args.seed);
  solve_sub->add_option("--epochs", solve_args.epochs)->check(CLI::PositiveNumber);
  solve_sub->add_option("--collocation", solve_args.collocation)->check(CLI::Range(2, 1000));
  solve_sub->add_option("--batch-size", solve_args.batch_size, "Minibatch size, 0 = full batch");
  solve_sub->add_option("--out", solve_args.out, "Solution grid CSV");
  solve_sub->add_option("--network", solve_args.network, "Trained network JSON");
  solve_sub->add_option("--history", solve_args.history, "Loss history CSV");

  AlphasArgs alphas_args;
  auto* alphas_sub = app.add_subcommand("alphas", "Per-layer alpha statistics of run records");
  alphas_sub->add_option("--in", alphas_args.in)->required()->check(CLI::ExistingFile);
  alphas_sub->add_option("--out", alphas_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "glnlab: %s\n", e.what());
    return 2;
  }

  try {
    if (*gen_cmd) return gen_data(gen);
    if (*run_cmd) return run(run_args);
    if (*stats_sub) return stats_cmd(stats_args);
    if (*ks_sub) return ks_cmd(ks_args);
    if (*solve_sub) return solve_cmd(solve_args);
    if (*alphas_sub) return alphas_cmd(alphas_args);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "glnlab: %s\n", e.what());
    return 2;
  } catch (const StructuralError& e) {
    std::fprintf(stderr, "glnlab: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "glnlab: %s\n", e.what());
    return 1;
  }
  return 2;
}
