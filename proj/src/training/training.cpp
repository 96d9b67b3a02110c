#include "gln/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "gln/error.hpp"

namespace gln {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw StructuralError("train config: learning_rate must be finite and >= 0");
  }
  if (batch_size < 1) throw StructuralError("train config: batch_size must be >= 1");
  if (patience < 1) throw StructuralError("train config: patience must be >= 1");
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty() || predictions.size() != targets.size()) {
    throw StructuralError("mse: predictions and targets must be equal, non-empty lengths (" +
                          std::to_string(predictions.size()) + " vs " +
                          std::to_string(targets.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

void adam_step(std::span<double> params, std::span<const double> grad,
               AdamState& state, double lr) {
  if (params.size() != grad.size() || params.size() != state.m.size()) {
    throw StructuralError("adam_step: parameter, gradient and state lengths differ");
  }
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw EvalError("adam_step: non-finite gradient at index " + std::to_string(i));
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(AdamState::kBeta1, t);
  const double c2 = 1.0 - std::pow(AdamState::kBeta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = AdamState::kBeta1 * state.m[i] + (1.0 - AdamState::kBeta1) * g;
    state.v[i] = AdamState::kBeta2 * state.v[i] + (1.0 - AdamState::kBeta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + AdamState::kEpsilon);
  }
}

TrainOutcome train(Network net, const Objective& objective, const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t n = objective.sample_count();
  if (n == 0) throw StructuralError("train: empty training set");

  TrainOutcome out{net, 0.0, 0, 0, {}, 0.0, TrainStatus::Ok, {}};
  out.best_val_loss = std::numeric_limits<double>::infinity();
  out.initial_train_loss = objective.train_loss(net);

  AdamState adam(net.param_count());
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(net.param_count());
  const std::size_t batch = objective.full_batch() ? n : std::min(cfg.batch_size, n);

  std::size_t streak = 0;
  auto fail = [&](const std::string& why) {
    out.status = TrainStatus::NonFinite;
    out.message = why;
  };

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (!objective.full_batch()) std::shuffle(order.begin(), order.end(), rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      const double loss = objective.loss_and_grad(net, idx, grad);
      if (!std::isfinite(loss)) {
        fail("non-finite training loss at epoch " + std::to_string(epoch));
        return out;
      }
      try {
        adam_step(net.params(), grad, adam, cfg.learning_rate);
      } catch (const EvalError& e) {
        fail(std::string(e.what()) + " at epoch " + std::to_string(epoch));
        return out;
      }
      weighted += loss * static_cast<double>(len);
    }
    const double val = objective.validation_loss(net);
    if (!std::isfinite(val)) {
      fail("non-finite validation loss at epoch " + std::to_string(epoch));
      return out;
    }
    out.loss_history.push_back({weighted / static_cast<double>(n), val});
    out.epochs_run = epoch;

    if (val < out.best_val_loss) {
      out.best_val_loss = val;
      out.best_epoch = epoch;
      out.best_net.set_params(net.params());
      streak = 0;
    } else if (val > out.best_val_loss) {
      ++streak;
    } else {
      streak = 0;
    }
    if (cfg.early_stopping && streak >= cfg.patience) break;
  }
  return out;
}

// ---------------------------------------------------------------------------

RegressionObjective::RegressionObjective(std::size_t input_dim,
                                         std::vector<double> train_x,
                                         std::vector<double> train_y,
                                         std::vector<double> val_x,
                                         std::vector<double> val_y)
    : input_dim_(input_dim),
      train_x_(std::move(train_x)),
      train_y_(std::move(train_y)),
      val_x_(std::move(val_x)),
      val_y_(std::move(val_y)) {
  if (input_dim_ == 0 || train_x_.size() != train_y_.size() * input_dim_ ||
      val_x_.size() != val_y_.size() * input_dim_) {
    throw StructuralError("regression objective: inputs and targets disagree in length");
  }
  if (train_y_.empty() || val_y_.empty()) {
    throw StructuralError("regression objective: training and validation sets must be non-empty");
  }
}

double RegressionObjective::loss_and_grad(const Network& net,
                                          std::span<const std::size_t> batch,
                                          std::span<double> grad) const {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(batch.size() * input_dim_);
  ys.reserve(batch.size());
  for (std::size_t i : batch) {
    xs.insert(xs.end(), train_x_.begin() + static_cast<std::ptrdiff_t>(i * input_dim_),
              train_x_.begin() + static_cast<std::ptrdiff_t>((i + 1) * input_dim_));
    ys.push_back(train_y_[i]);
  }
  return batch_mse_and_grad(net, xs, ys, grad);
}

double regression_mse(const Network& net, std::span<const double> inputs,
                      std::span<const double> targets) {
  std::vector<double> pred(targets.size());
  batch_predict(net, inputs, pred);
  return mse(pred, targets);
}

double RegressionObjective::train_loss(const Network& net) const {
  return regression_mse(net, train_x_, train_y_);
}

double RegressionObjective::validation_loss(const Network& net) const {
  return regression_mse(net, val_x_, val_y_);
}

void write_loss_history(const TrainOutcome& outcome, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "epoch,train_loss,val_loss\n";
  char buf[96];
  for (std::size_t i = 0; i < outcome.loss_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1,
                  outcome.loss_history[i].train, outcome.loss_history[i].validation);
    out << buf;
  }
}

}  // namespace gln
