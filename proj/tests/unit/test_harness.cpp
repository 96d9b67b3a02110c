#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gln/harness.hpp"
#include "support.hpp"

using namespace gln;

namespace {

ExperimentSpec tiny_regression() {
  ExperimentSpec s;
  s.task = TaskKind::Regression;
  s.target = "se";
  s.model = ModelKind::Gln;
  s.architecture = Architecture::TwoHidden;
  s.repetitions = 3;
  s.points = 80;
  s.train = TrainConfig{1e-2, 16, 40, 5, 0, true};
  return s;
}

ExperimentSpec tiny_deq() {
  ExperimentSpec s;
  s.task = TaskKind::Deq;
  s.target = "decay";
  s.repetitions = 2;
  s.collocation = 8;
  s.epochs = 20;
  return s;
}

}  // namespace

TEST(Spec, ParsesAllSections) {
  const auto s = parse_spec(
      "[experiment]\n"
      "task = regression\n"
      "target = ees\n"
      "model = tbn\n"
      "architecture = two_hidden\n"
      "repetitions = 30\n"
      "base_seed = 100\n"
      "[data]\n"
      "points = 500\n"
      "lo = -5\n"
      "hi = 5.5\n"
      "[train]\n"
      "learning_rate = 0.002\n"
      "batch_size = 32\n"
      "max_epochs = 200000\n"
      "patience = 50\n");
  EXPECT_EQ(s.model, ModelKind::Tbn);
  EXPECT_EQ(s.architecture, Architecture::TwoHidden);
  EXPECT_EQ(s.repetitions, 30u);
  EXPECT_EQ(s.base_seed, 100u);
  EXPECT_EQ(s.points, 500u);
  EXPECT_EQ(s.hi, 5.5);
  EXPECT_EQ(s.train.learning_rate, 0.002);
  EXPECT_EQ(s.train.max_epochs, 200000u);
  EXPECT_EQ(s.input_dim(), 1u);
}

TEST(Spec, DeqInputDimensionFollowsProblem) {
  const auto s = parse_spec("[experiment]\ntask = deq\ntarget = heat\n[deq]\nepochs = 10\n");
  EXPECT_EQ(s.input_dim(), 2u);
  EXPECT_EQ(s.shape().input_dim, 2u);
  EXPECT_EQ(s.epochs, 10u);
}

TEST(Spec, RejectsBadInput) {
  EXPECT_THROW(parse_spec("[experiment]\nflavour = x\n"), ConfigError);
  EXPECT_THROW(parse_spec("[extra]\na = 1\n"), ConfigError);
  EXPECT_THROW(parse_spec("[experiment]\nmodel = relu\n"), ConfigError);
  EXPECT_THROW(parse_spec("[experiment]\ntask = deq\ntarget = burgers\n"), ConfigError);
  EXPECT_THROW(parse_spec("[experiment]\ntarget = sunspot\n"), ConfigError);
  EXPECT_THROW(parse_spec("[experiment]\nrepetitions = -3\n"), ConfigError);
  EXPECT_THROW(parse_spec("[experiment]\nrepetitions = 0\n"), ConfigError);
  EXPECT_THROW(parse_spec("[train]\nlearning_rate = fast\n"), ConfigError);
  EXPECT_THROW(parse_spec("[data]\nlo = 3\nhi = 1\n"), ConfigError);
  EXPECT_THROW(parse_spec("[experiment\n"), ConfigError);
}

TEST(Spec, IniRoundTrip) {
  for (const auto& s : {tiny_regression(), tiny_deq()}) {
    const auto back = parse_spec(spec_to_ini(s));
    EXPECT_EQ(spec_to_ini(back), spec_to_ini(s));
    EXPECT_EQ(back.target, s.target);
    EXPECT_EQ(back.repetitions, s.repetitions);
  }
}

TEST(Spec, LoadResolvesRelativeDataPath) {
  const auto dir = std::filesystem::temp_directory_path() / "gln_cfg_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "sun.cfg";
  std::ofstream(cfg) << "[experiment]\ntarget = sunspot\n[data]\npath = spots.csv\n";
  EXPECT_EQ(load_spec(cfg.string()).data_path, (dir / "spots.csv").string());
  EXPECT_THROW(load_spec((dir / "missing.cfg").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, RecordsAreSeededOrderedAndDeterministic) {
  const auto spec = tiny_regression();
  const auto a = run_experiment(spec, 1);
  const auto b = run_experiment(spec, 1);
  const auto c = run_experiment(spec, 3);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, spec.base_seed + i);
    EXPECT_EQ(a[i].status, kStatusOk);
    EXPECT_EQ(a[i].alphas.size(), 2u);
    EXPECT_FALSE(a[i].wall_time.has_value());
  }
  EXPECT_EQ(run_records_csv(a), run_records_csv(c));
}

TEST(Experiment, NonGlnModelsRecordNoAlphas) {
  auto spec = tiny_regression();
  spec.model = ModelKind::Sin;
  spec.repetitions = 1;
  EXPECT_TRUE(run_experiment(spec)[0].alphas.empty());
}

TEST(Experiment, TimingIsOptIn) {
  auto spec = tiny_regression();
  spec.repetitions = 1;
  spec.timing = true;
  const auto r = run_experiment(spec);
  ASSERT_TRUE(r[0].wall_time.has_value());
  EXPECT_GE(*r[0].wall_time, 0.0);
}

TEST(Experiment, DivergingRunIsRecordedAndBatchContinues) {
  auto spec = tiny_regression();
  spec.train.learning_rate = 1e200;
  const auto r = run_experiment(spec, 2);
  ASSERT_EQ(r.size(), 3u);
  for (const auto& rec : r) {
    EXPECT_TRUE(rec.failed());
    EXPECT_TRUE(std::isnan(rec.test_mse));
  }
  const auto text = stats_csv(r, "test_mse");
  EXPECT_NE(text.find(",test_mse,0,NA,NA,NA,NA,NA,NA,3\n"), std::string::npos) << text;
}

TEST(Experiment, DeqRunsUseFixedBudget) {
  const auto spec = tiny_deq();
  const auto r = run_experiment(spec);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].status, kStatusFixedBudget);
  EXPECT_EQ(r[0].epochs_run, 20u);
  EXPECT_EQ(r[0].task, "deq");
  EXPECT_EQ(r[0].dataset_or_problem, "decay");
  EXPECT_GE(r[0].test_mse, 0.0);

  auto ks = tiny_deq();
  ks.target = "ks";
  ks.collocation = 3;
  ks.epochs = 1;
  ks.repetitions = 1;
  EXPECT_EQ(run_experiment(ks)[0].status, kStatusFixedBudgetResidual);
}

TEST(Experiment, SolveReturnsNetworkMatchingRecord) {
  const auto res = solve(tiny_deq(), 5);
  EXPECT_EQ(res.record.seed, 5u);
  EXPECT_EQ(res.record.alphas[0], res.outcome.best_net.alpha_values()[0].alpha);
  EXPECT_THROW(solve(tiny_regression(), 1), ConfigError);
}

TEST(Compare, SelfAndDisjoint) {
  const auto a = run_experiment(tiny_regression());
  const auto self = compare(a, a, "test_mse");
  EXPECT_EQ(self.ks.d_statistic, 0.0);
  EXPECT_FALSE(self.ks.reject_at_5pct);

  auto shifted = a;
  for (auto& r : shifted) {
    r.model = "tbn";
    r.test_mse += 1.0;
  }
  const auto apart = compare(a, shifted, "test_mse");
  EXPECT_EQ(apart.ks.d_statistic, 1.0);
  EXPECT_EQ(ks_csv_header(), "model_a,model_b,metric,D,p,reject");
  const auto row = ks_csv_row(apart);
  EXPECT_EQ(row.rfind("gln:two_hidden,tbn:two_hidden,test_mse,1,", 0), 0u) << row;
  EXPECT_THROW(compare({a[0]}, a, "test_mse"), StructuralError);
  EXPECT_THROW(compare(a, a, "accuracy"), StructuralError);
}

TEST(Reports, StatsAndAlphaTables) {
  auto runs = run_experiment(tiny_regression());
  auto failed = runs[0];
  failed.status = kStatusFailed;
  failed.test_mse = std::nan("");
  runs.push_back(failed);
  const auto table = stats_csv(runs, "test_mse");
  const auto lines = std::count(table.begin(), table.end(), '\n');
  EXPECT_EQ(lines, 2);
  EXPECT_NE(table.find("regression,se,gln,two_hidden,test_mse,3,"), std::string::npos);
  EXPECT_EQ(table.back(), '\n');
  EXPECT_EQ(table.substr(table.size() - 3), ",1\n");

  const auto alphas = alphas_csv(stats::alpha_summary(runs));
  EXPECT_EQ(alphas.substr(0, alphas.find('\n')), "layer,n,min,max,mean,median,std,cv");
  EXPECT_EQ(std::count(alphas.begin(), alphas.end(), '\n'), 3);
}

TEST(Spec, ShippedConfigsAreValid) {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(GLN_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++n;
    const auto s = load_spec(entry.path().string());
    const auto stem = entry.path().stem().string();
    EXPECT_EQ(stem, s.target + "_" + std::string(to_string(s.model)) + "_" +
                        std::string(to_string(s.architecture)));
    EXPECT_EQ(s.repetitions, 10u);
    if (s.target == "sunspot") {
      EXPECT_EQ(s.data_path, std::string(GLN_CONFIG_DIR) + "/data/sunspot.csv");
    }
  }
  EXPECT_EQ(n, 80u);
}
