// Batched forward and backward passes for plain MSE regression. This is the
// training fast path; the tape-based gradient is the reference it is tested
// against.

#include <algorithm>

#include <Eigen/Dense>

#include "gln/network.hpp"

namespace gln {
namespace {

using Matrix = Eigen::MatrixXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;
using VectorMap = Eigen::Map<const Eigen::VectorXd>;

struct LayerCache {
  Matrix input;  // activations entering the layer (in x B)
  Matrix sin_z;  // populated for Sin and Gln
  Matrix tanh_z;  // populated for Tanh and Gln
  Matrix cos_z;
};

struct ForwardCache {
  std::vector<std::vector<LayerCache>> branches;
  Matrix features;  // concatenated final activations (head.in x B)
  Eigen::RowVectorXd output;
};

Matrix as_columns(const Network& net, std::span<const double> inputs) {
  const auto dim = static_cast<Eigen::Index>(net.input_dim());
  if (inputs.size() % net.input_dim() != 0) {
    throw StructuralError("batch: input length is not a multiple of input_dim");
  }
  const auto n = static_cast<Eigen::Index>(inputs.size() / net.input_dim());
  return Eigen::Map<const Matrix>(inputs.data(), dim, n);
}

void run_forward(const Network& net, const Matrix& x, bool keep,
                 ForwardCache& cache) {
  const auto params = net.params();
  const auto batch = x.cols();
  cache.features.resize(static_cast<Eigen::Index>(net.head().in), batch);
  cache.branches.assign(net.branches().size(), {});
  Eigen::Index row = 0;
  for (std::size_t b = 0; b < net.branches().size(); ++b) {
    Matrix a = x;
    for (const DenseLayer& layer : net.branches()[b]) {
      RowMajorMap w(params.data() + layer.weight_offset(),
                    static_cast<Eigen::Index>(layer.out),
                    static_cast<Eigen::Index>(layer.in));
      VectorMap bias(params.data() + layer.bias_offset(),
                     static_cast<Eigen::Index>(layer.out));
      Matrix z = w * a;
      z.colwise() += bias;
      LayerCache lc;
      Matrix next;
      switch (layer.activation) {
        case Activation::Sin:
          lc.sin_z = z.array().sin().matrix();
          if (keep) lc.cos_z = z.array().cos().matrix();
          next = lc.sin_z;
          break;
        case Activation::Tanh:
          lc.tanh_z = z.array().tanh().matrix();
          next = lc.tanh_z;
          break;
        case Activation::Gln: {
          const double alpha = ad::sigmoid(params[layer.gate_offset()]);
          const double act_bias = params[layer.gate_offset() + 1];
          lc.sin_z = z.array().sin().matrix();
          lc.tanh_z = z.array().tanh().matrix();
          if (keep) lc.cos_z = z.array().cos().matrix();
          next = (alpha * lc.sin_z.array() + (1.0 - alpha) * lc.tanh_z.array() -
                  act_bias)
                     .matrix();
          break;
        }
        case Activation::Identity:
          next = z;
          break;
      }
      if (keep) {
        lc.input = std::move(a);
        cache.branches[b].push_back(std::move(lc));
      }
      a = std::move(next);
    }
    cache.features.middleRows(row, a.rows()) = a;
    row += a.rows();
  }
  const DenseLayer& head = net.head();
  Eigen::Map<const Eigen::RowVectorXd> hw(params.data() + head.weight_offset(),
                                          static_cast<Eigen::Index>(head.in));
  cache.output = hw * cache.features;
  cache.output.array() += params[head.bias_offset()];
}

}  // namespace

void batch_predict(const Network& net, std::span<const double> inputs,
                   std::span<double> out) {
  const Matrix x = as_columns(net, inputs);
  if (out.size() != static_cast<std::size_t>(x.cols())) {
    throw StructuralError("batch_predict: output length mismatch");
  }
  ForwardCache cache;
  run_forward(net, x, false, cache);
  for (Eigen::Index i = 0; i < x.cols(); ++i) out[static_cast<std::size_t>(i)] = cache.output[i];
}

double batch_mse_and_grad(const Network& net, std::span<const double> inputs,
                          std::span<const double> targets,
                          std::span<double> grad) {
  const Matrix x = as_columns(net, inputs);
  const auto batch = x.cols();
  if (batch == 0 || targets.size() != static_cast<std::size_t>(batch)) {
    throw StructuralError("batch_mse_and_grad: targets must match a non-empty batch");
  }
  if (grad.size() != net.param_count()) {
    throw StructuralError("batch_mse_and_grad: gradient length mismatch");
  }
  ForwardCache cache;
  run_forward(net, x, true, cache);

  Eigen::Map<const Eigen::RowVectorXd> t(targets.data(), batch);
  const Eigen::RowVectorXd err = cache.output - t;
  const double loss = err.squaredNorm() / static_cast<double>(batch);
  const Eigen::RowVectorXd dy = err * (2.0 / static_cast<double>(batch));

  const auto params = net.params();
  std::fill(grad.begin(), grad.end(), 0.0);
  const DenseLayer& head = net.head();
  Eigen::Map<Eigen::RowVectorXd>(grad.data() + head.weight_offset(),
                                 static_cast<Eigen::Index>(head.in)) =
      dy * cache.features.transpose();
  grad[head.bias_offset()] = dy.sum();
  Eigen::Map<const Eigen::VectorXd> hw(params.data() + head.weight_offset(),
                                       static_cast<Eigen::Index>(head.in));
  const Matrix d_features = hw * dy;

  Eigen::Index row = 0;
  for (std::size_t b = 0; b < net.branches().size(); ++b) {
    const auto& branch = net.branches()[b];
    const auto width = static_cast<Eigen::Index>(branch.back().out);
    Matrix da = d_features.middleRows(row, width);
    row += width;
    for (std::size_t l = branch.size(); l-- > 0;) {
      const DenseLayer& layer = branch[l];
      const LayerCache& lc = cache.branches[b][l];
      Matrix dz;
      switch (layer.activation) {
        case Activation::Sin:
          dz = (da.array() * lc.cos_z.array()).matrix();
          break;
        case Activation::Tanh:
          dz = (da.array() * (1.0 - lc.tanh_z.array().square())).matrix();
          break;
        case Activation::Gln: {
          const double alpha = ad::sigmoid(params[layer.gate_offset()]);
          dz = (da.array() * (alpha * lc.cos_z.array() +
                              (1.0 - alpha) * (1.0 - lc.tanh_z.array().square())))
                   .matrix();
          grad[layer.gate_offset()] =
              alpha * (1.0 - alpha) *
              (da.array() * (lc.sin_z.array() - lc.tanh_z.array())).sum();
          grad[layer.gate_offset() + 1] = -da.sum();
          break;
        }
        case Activation::Identity:
          dz = da;
          break;
      }
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          grad.data() + layer.weight_offset(), static_cast<Eigen::Index>(layer.out),
          static_cast<Eigen::Index>(layer.in)) = dz * lc.input.transpose();
      Eigen::Map<Eigen::VectorXd>(grad.data() + layer.bias_offset(),
                                  static_cast<Eigen::Index>(layer.out)) =
          dz.rowwise().sum();
      if (l > 0) {
        RowMajorMap w(params.data() + layer.weight_offset(),
                      static_cast<Eigen::Index>(layer.out),
                      static_cast<Eigen::Index>(layer.in));
        da = w.transpose() * dz;
      }
    }
  }
  return loss;
}

}  // namespace gln
