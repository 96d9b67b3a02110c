#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gln/network.hpp"

namespace gln {

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 200000;
  std::size_t patience = 30;
  std::uint64_t seed = 0;
  // Fixed-budget runs (differential equations) train for max_epochs and
  // only keep the best validation checkpoint.
  bool early_stopping = true;

  void validate() const;
};

// Adam with beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
};

// Mean squared difference. Throws StructuralError on empty or mismatched
// input.
double mse(std::span<const double> predictions, std::span<const double> targets);

// One bias-corrected Adam update. A non-finite gradient entry aborts the step
// (EvalError naming the index) before anything is modified.
void adam_step(std::span<double> params, std::span<const double> grad,
               AdamState& state, double lr);

// What train() minimizes. Implementations must be deterministic.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t sample_count() const = 0;
  // Full-batch objectives take one optimizer step per epoch.
  virtual bool full_batch() const { return false; }
  // Loss over the given training samples; grad receives d loss / d params.
  virtual double loss_and_grad(const Network& net,
                               std::span<const std::size_t> batch,
                               std::span<double> grad) const = 0;
  // Loss over the whole training set.
  virtual double train_loss(const Network& net) const = 0;
  virtual double validation_loss(const Network& net) const = 0;
};

struct EpochLoss {
  double train = 0.0;
  double validation = 0.0;
};

enum class TrainStatus { Ok, NonFinite };

struct TrainOutcome {
  Network best_net;
  double best_val_loss = 0.0;
  std::size_t best_epoch = 0;  // 1-based; 0 if no epoch completed
  std::size_t epochs_run = 0;
  std::vector<EpochLoss> loss_history;
  double initial_train_loss = 0.0;
  TrainStatus status = TrainStatus::Ok;
  std::string message;
};

// Seeded minibatch training with validation-based early stopping: stops after
// `patience` consecutive epochs whose validation loss exceeds the running
// minimum, and returns the checkpoint with the lowest validation loss.
TrainOutcome train(Network net, const Objective& objective, const TrainConfig& cfg);

// Supervised regression on (input row, target) pairs.
class RegressionObjective : public Objective {
 public:
  RegressionObjective(std::size_t input_dim, std::vector<double> train_x,
                      std::vector<double> train_y, std::vector<double> val_x,
                      std::vector<double> val_y);

  std::size_t sample_count() const override { return train_y_.size(); }
  double loss_and_grad(const Network& net, std::span<const std::size_t> batch,
                       std::span<double> grad) const override;
  double train_loss(const Network& net) const override;
  double validation_loss(const Network& net) const override;

 private:
  std::size_t input_dim_;
  std::vector<double> train_x_;
  std::vector<double> train_y_;
  std::vector<double> val_x_;
  std::vector<double> val_y_;
};

// Evaluates predictions over a set of inputs and returns the MSE.
double regression_mse(const Network& net, std::span<const double> inputs,
                      std::span<const double> targets);

// CSV with header epoch,train_loss,val_loss.
void write_loss_history(const TrainOutcome& outcome, const std::string& path);

}  // namespace gln
