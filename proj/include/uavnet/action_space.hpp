#pragma once

#include "uavnet/mlp.hpp"

namespace uavnet {

// Box action bounds plus the tanh squashing head that maps raw net outputs
// into them. clip_hi is the largest representable legal value per channel:
// angle channels live in the half-open [0, 2*pi), so their clip sits one ulp
// below the scale bound.
struct ActionSpace {
  Vector lo, hi, clip_hi;

  // [alpha_1..alpha_N, d_1..d_N]: angles in [0, 2*pi), distances in [0, d_max]
  static ActionSpace uav_actions(int n_uav, double d_max);

  int dim() const { return static_cast<int>(lo.size()); }

  Vector clip(const Vector& a) const;

  // y = center + half*tanh(z), then clipped; tanh values are cached for the
  // backward pass.
  Matrix squash(const Matrix& z, Matrix* tanh_cache = nullptr) const;

  // dLoss/dz given dLoss/dy and the cached tanh values.
  Matrix squash_backward(const Matrix& tanh_z, const Matrix& dy) const;

  Normalizer normalizer() const { return {lo, hi}; }
};

}  // namespace uavnet
