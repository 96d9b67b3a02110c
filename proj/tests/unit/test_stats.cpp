#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "gln/error.hpp"
#include "gln/records.hpp"
#include "gln/stats.hpp"
#include "support.hpp"

using namespace gln;
using namespace gln::stats;

TEST(Describe, KnownSample) {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  const auto s = describe(v);
  EXPECT_EQ(s.n, 4u);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(5.0 / 3.0));
  ASSERT_TRUE(s.cv.has_value());
  EXPECT_DOUBLE_EQ(*s.cv, std::sqrt(5.0 / 3.0) / 2.5);
  EXPECT_EQ(describe(std::vector<double>{5.0, 1.0, 3.0}).median, 3.0);
}

TEST(Describe, PermutationInvariantAndGuarded) {
  const std::vector<double> a{0.1, 1e-9, 3.3, 7e5, 0.2};
  const std::vector<double> b{7e5, 0.2, 0.1, 3.3, 1e-9};
  const auto sa = describe(a);
  const auto sb = describe(b);
  EXPECT_EQ(sa.mean, sb.mean);
  EXPECT_EQ(sa.std, sb.std);
  EXPECT_FALSE(describe(std::vector<double>{-1.0, 1.0}).cv.has_value());
  EXPECT_THROW(describe(std::vector<double>{1.0}), StructuralError);
  EXPECT_THROW(describe(std::vector<double>{1.0, std::nan("")}), StructuralError);
}

TEST(Ks, MatchesReferenceImplementation) {
  const auto cases = testkit::load_json(testkit::oracle_path("ks_cases.json"));
  ASSERT_EQ(cases.size(), 20u);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto a = cases[i]["a"].get<std::vector<double>>();
    const auto b = cases[i]["b"].get<std::vector<double>>();
    const auto r = ks_two_sample(a, b);
    EXPECT_NEAR(r.d_statistic, cases[i]["d"].get<double>(), 1e-6) << "case " << i;
    EXPECT_NEAR(r.p_value, cases[i]["p"].get<double>(), 1e-6) << "case " << i;
    EXPECT_EQ(r.n1, a.size());
  }
}

TEST(Ks, IdenticalAndDisjointSamples) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const auto same = ks_two_sample(a, a);
  EXPECT_EQ(same.d_statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  EXPECT_FALSE(same.reject_at_5pct);
  const std::vector<double> far{11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  const auto apart = ks_two_sample(a, far);
  EXPECT_EQ(apart.d_statistic, 1.0);
  EXPECT_TRUE(apart.reject_at_5pct);
  EXPECT_THROW(ks_two_sample(a, std::vector<double>{}), StructuralError);
  EXPECT_THROW(ks_two_sample(a, std::vector<double>{std::nan("")}), StructuralError);
}

TEST(Ks, KolmogorovSurvivalFunction) {
  EXPECT_EQ(kolmogorov_q(0.0), 1.0);
  EXPECT_NEAR(kolmogorov_q(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(kolmogorov_q(1.36), 0.049485876755377876, 1e-12);
  EXPECT_LT(kolmogorov_q(10.0), 1e-80);
}

namespace {

RunRecord record(std::string model, double mse, std::vector<double> alphas,
                 std::string status = kStatusOk) {
  RunRecord r;
  r.task = "regression";
  r.dataset_or_problem = "ees";
  r.model = std::move(model);
  r.architecture = "two_hidden";
  r.test_mse = mse;
  r.epochs_run = 10;
  r.alphas = std::move(alphas);
  r.status = std::move(status);
  return r;
}

}  // namespace

TEST(AlphaSummary, PerLayerAndSkipsFailures) {
  const std::vector<RunRecord> runs{
      record("gln", 0.1, {0.4, 0.6}), record("gln", 0.2, {0.5, 0.7}),
      record("gln", std::nan(""), {}, kStatusFailed), record("gln", 0.3, {0.45, 0.65})};
  const auto s = alpha_summary(runs);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].layer, 1u);
  EXPECT_EQ(s[0].stats.n, 3u);
  EXPECT_EQ(s[1].stats.median, 0.65);

  EXPECT_THROW(alpha_summary(std::vector<RunRecord>{record("sin", 0.1, {}),
                                                    record("sin", 0.1, {})}),
               StructuralError);
  EXPECT_THROW(alpha_summary(std::vector<RunRecord>{record("gln", 0.1, {0.4}),
                                                    record("tbn", 0.1, {0.4})}),
               StructuralError);
  EXPECT_THROW(alpha_summary(std::vector<RunRecord>{record("gln", 0.1, {0.4}),
                                                    record("gln", 0.1, {0.4, 0.5})}),
               StructuralError);
}

TEST(MetricValues, SkipsFailedAndRejectsUnknown) {
  const std::vector<RunRecord> runs{record("gln", 0.1, {0.4}),
                                    record("gln", std::nan(""), {}, kStatusFailed)};
  EXPECT_EQ(metric_values(runs, "test_mse"), std::vector<double>{0.1});
  EXPECT_EQ(metric_values(runs, "epochs_run"), std::vector<double>{10.0});
  EXPECT_THROW(metric_values(runs, "loss"), StructuralError);
}

TEST(Records, CsvRoundTripIsExact) {
  std::vector<RunRecord> runs{record("gln", 0.1 + 1e-17, {0.123456789012345678, 0.9}),
                              record("tanh", 3.0e-300, {}),
                              record("gln", std::nan(""), {}, kStatusFailed)};
  runs[1].wall_time = 1.25;
  runs[1].seed = 18446744073709551615ULL;
  const auto text = run_records_csv(runs);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "task,dataset_or_problem,model,architecture,seed,test_mse,epochs_run,alpha_1,"
            "alpha_2,wall_time_s,status");
  const auto back = parse_run_records(text);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0], runs[0]);
  EXPECT_EQ(back[1], runs[1]);
  EXPECT_TRUE(std::isnan(back[2].test_mse));
  EXPECT_TRUE(back[2].failed());
  EXPECT_EQ(run_records_csv(back), text);

  const auto path = (std::filesystem::temp_directory_path() / "gln_runs.csv").string();
  write_run_records(runs, path);
  EXPECT_EQ(read_run_records(path)[1], runs[1]);
  std::filesystem::remove(path);
}

TEST(Records, MalformedInputNamesTheLine) {
  const std::string header =
      "task,dataset_or_problem,model,architecture,seed,test_mse,epochs_run,alpha_1,alpha_2,"
      "wall_time_s,status\n";
  EXPECT_THROW(parse_run_records(""), DataError);
  EXPECT_THROW(parse_run_records("a,b\n"), DataError);
  try {
    parse_run_records(header + "regression,ees,gln,one_hidden,1,x,5,NA,NA,NA,ok\n", "f.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("f.csv line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_run_records(header + "regression,ees,gln\n"), DataError);
  EXPECT_THROW(parse_run_records(header + "regression,ees,gln,one_hidden,1,0.1,5,NA,0.5,NA,ok\n"),
               DataError);
  RunRecord three = record("gln", 0.1, {0.1, 0.2, 0.3});
  EXPECT_THROW(run_records_csv({three}), StructuralError);
}
