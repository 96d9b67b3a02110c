#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gln/training.hpp"
#include "support.hpp"

using namespace gln;

TEST(Mse, ValuesAndErrors) {
  const std::vector<double> p{1.0, 2.0, 4.0};
  const std::vector<double> t{1.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(mse(p, t), 13.0 / 3.0);
  EXPECT_THROW(mse(std::vector<double>{}, std::vector<double>{}), StructuralError);
  EXPECT_THROW(mse(p, std::vector<double>{1.0}), StructuralError);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // The bias-corrected first step is lr * g / (|g| + eps) ~ lr * sign(g).
  std::vector<double> p{1.0, -2.0};
  const std::vector<double> g{0.3, -5.0};
  AdamState s(2);
  adam_step(p, g, s, 0.01);
  EXPECT_NEAR(p[0], 1.0 - 0.01, 1e-9);
  EXPECT_NEAR(p[1], -2.0 + 0.01, 1e-9);
  EXPECT_EQ(s.step, 1u);
}

TEST(Adam, NonFiniteGradientLeavesStateUntouched) {
  std::vector<double> p{1.0, 2.0};
  const std::vector<double> g{0.1, std::numeric_limits<double>::quiet_NaN()};
  AdamState s(2);
  EXPECT_THROW(adam_step(p, g, s, 0.01), EvalError);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(s.step, 0u);
  EXPECT_EQ(s.m[0], 0.0);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.learning_rate = -1.0;
  EXPECT_THROW(c.validate(), StructuralError);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), StructuralError);
  c = TrainConfig{};
  c.patience = 0;
  EXPECT_THROW(c.validate(), StructuralError);
}

namespace {

RegressionObjective line_objective() {
  std::vector<double> tx, ty, vx, vy;
  for (int i = 0; i < 40; ++i) {
    const double x = -1.0 + i / 20.0;
    (i % 4 == 0 ? vx : tx).push_back(x);
    (i % 4 == 0 ? vy : ty).push_back(std::sin(2 * x));
  }
  return RegressionObjective(1, tx, ty, vx, vy);
}

}  // namespace

TEST(Train, ReducesLossAndIsDeterministic) {
  const auto obj = line_objective();
  const auto net = init(NetworkShape::one_hidden(1), ModelKind::Gln, 1);
  TrainConfig cfg{1e-2, 8, 300, 1000, 7, true};
  const auto a = train(net, obj, cfg);
  const auto b = train(net, obj, cfg);
  EXPECT_EQ(a.status, TrainStatus::Ok);
  EXPECT_EQ(a.epochs_run, 300u);
  EXPECT_LT(a.best_val_loss, 0.1 * obj.validation_loss(net));
  EXPECT_TRUE(std::ranges::equal(a.best_net.params(), b.best_net.params()));
  EXPECT_EQ(a.loss_history.size(), 300u);
  EXPECT_DOUBLE_EQ(a.initial_train_loss, obj.train_loss(net));
  EXPECT_DOUBLE_EQ(obj.validation_loss(a.best_net), a.best_val_loss);
}

TEST(Train, ZeroLearningRateKeepsFirstCheckpoint) {
  // Validation loss never changes, so no epoch is worse than the minimum and
  // training runs to the cap; the best checkpoint is the first epoch.
  const auto obj = line_objective();
  const auto net = init(NetworkShape::one_hidden(1), ModelKind::Sin, 1);
  const auto out = train(net, obj, TrainConfig{0.0, 8, 20, 3, 1, true});
  EXPECT_EQ(out.best_epoch, 1u);
  EXPECT_EQ(out.epochs_run, 20u);
  EXPECT_TRUE(std::ranges::equal(out.best_net.params(), net.params()));
}

TEST(Train, EarlyStoppingHonoursPatience) {
  const auto obj = line_objective();
  const auto net = init(NetworkShape::one_hidden(1), ModelKind::Tanh, 1);
  // A huge learning rate makes validation loss bounce above its minimum.
  const auto out = train(net, obj, TrainConfig{5.0, 8, 5000, 5, 1, true});
  EXPECT_LT(out.epochs_run, 5000u);
  EXPECT_GE(out.epochs_run, out.best_epoch + 5);
}

class BlowUp : public Objective {
 public:
  std::size_t sample_count() const override { return 4; }
  double loss_and_grad(const Network&, std::span<const std::size_t>,
                       std::span<double> grad) const override {
    std::fill(grad.begin(), grad.end(), 0.0);
    return std::numeric_limits<double>::infinity();
  }
  double train_loss(const Network&) const override { return 1.0; }
  double validation_loss(const Network&) const override { return 1.0; }
};

TEST(Train, NonFiniteLossIsReportedNotThrown) {
  const auto net = init(NetworkShape::one_hidden(1), ModelKind::Gln, 1);
  const auto out = train(net, BlowUp{}, TrainConfig{});
  EXPECT_EQ(out.status, TrainStatus::NonFinite);
  EXPECT_FALSE(out.message.empty());
  EXPECT_EQ(out.epochs_run, 0u);
}

TEST(RegressionObjective, RejectsMismatchedData) {
  EXPECT_THROW(RegressionObjective(1, {1.0, 2.0}, {1.0}, {1.0}, {1.0}), StructuralError);
  EXPECT_THROW(RegressionObjective(1, {}, {}, {1.0}, {1.0}), StructuralError);
}

TEST(Train, EpochCapDominatesLargePatience) {
  const auto obj = line_objective();
  const auto net = init(NetworkShape::one_hidden(1), ModelKind::Gln, 2);
  const auto out = train(net, obj, TrainConfig{1e-3, 64, 10, 1000, 1, true});
  EXPECT_EQ(out.epochs_run, 10u);
}

TEST(Train, BestValidationLossIsRunningMinimum) {
  const auto obj = line_objective();
  const auto net = init(NetworkShape::one_hidden(1), ModelKind::Tbn, 3);
  const auto out = train(net, obj, TrainConfig{3e-2, 8, 200, 1000, 4, true});
  double best = out.loss_history.at(0).validation;
  for (const auto& e : out.loss_history) best = std::min(best, e.validation);
  EXPECT_EQ(best, out.best_val_loss);
  EXPECT_EQ(out.loss_history.at(out.best_epoch - 1).validation, out.best_val_loss);
}

TEST(Train, ZeroLearningRateKeepsLossHistoryConstant) {
  const auto obj = line_objective();
  const auto net = init(NetworkShape::two_hidden(1), ModelKind::Gln, 5);
  const auto out = train(net, obj, TrainConfig{0.0, 8, 5, 30, 1, true});
  for (const auto& e : out.loss_history) {
    EXPECT_EQ(e.validation, out.loss_history[0].validation);
    EXPECT_NEAR(e.train, out.initial_train_loss, 1e-15);
  }
}
