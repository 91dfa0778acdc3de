#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "uavnet/rng.hpp"

namespace uavnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Layer {
  Matrix w;  // out x in
  Vector b;
};

struct Gradients {
  std::vector<Matrix> w;
  std::vector<Vector> b;
};

// Activations retained by a forward pass; columns are batch samples.
struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre;  // affine outputs per layer
  std::vector<Matrix> act;  // post-activation per layer (last entry = output)
};

// Fully connected net with ReLU hidden layers and an identity output layer.
// Batches are column-per-sample.
class Mlp {
 public:
  Mlp() = default;

  // Uniform +-1/sqrt(fan_in) everywhere; the last layer switches to
  // +-final_scale when final_scale > 0 so initial outputs sit near zero.
  static Mlp create(int in, const std::vector<int>& hidden, int out, Rng& rng,
                    double final_scale = 0.0);

  int input_dim() const {
    return layers.empty() ? 0 : static_cast<int>(layers.front().w.cols());
  }
  int output_dim() const {
    return layers.empty() ? 0 : static_cast<int>(layers.back().w.rows());
  }

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, ForwardCache& cache) const;

  // Exact reverse-mode gradients. `upstream` is dLoss/dOutput with the same
  // shape as the output; `input_grad`, when given, receives dLoss/dInput
  // (needed to pull the critic's action gradient out of the input layer).
  Gradients backward(const ForwardCache& cache, const Matrix& upstream,
                     Matrix* input_grad = nullptr) const;

  std::vector<Layer> layers;

  // Samples seen by forward(); lets tests prove which nets a routine touched.
  mutable std::int64_t eval_cols = 0;
};

// theta' <- tau*theta + (1-tau)*theta', elementwise.
void soft_update(const Mlp& main, Mlp& target, double tau);

Gradients zero_gradients(const Mlp& net);

// Adam with the L2 penalty folded into the weight gradients (biases are not
// regularized). step() refuses non-finite gradients: parameters and moments
// stay untouched and it returns false.
class Adam {
 public:
  Adam(double lr, double l2) : lr_(lr), l2_(l2) {}

  bool step(Mlp& net, const Gradients& g);

 private:
  double lr_;
  double l2_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  std::vector<Matrix> mw_, vw_;
  std::vector<Vector> mb_, vb_;
};

// Per-component affine map to [-1, 1]; degenerate components (lo == hi) map
// to 0 and carry zero slope.
struct Normalizer {
  Vector lo, hi;

  Vector normalize(const Vector& x) const;
  Matrix normalize_cols(const Matrix& x) const;
  Vector denormalize(const Vector& y) const;
  Vector slope() const;  // d(normalized)/d(raw) = 2/(hi-lo)
};

}  // namespace uavnet
