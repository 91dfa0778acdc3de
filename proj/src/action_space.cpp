#include "uavnet/action_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavnet {

ActionSpace ActionSpace::uav_actions(int n_uav, double d_max) {
  if (n_uav <= 0) throw std::invalid_argument("need at least one UAV");
  if (d_max < 0.0) throw std::invalid_argument("d_max must be nonnegative");
  const double two_pi = 2.0 * std::numbers::pi;
  ActionSpace s;
  s.lo = Vector::Zero(2 * n_uav);
  s.hi.resize(2 * n_uav);
  s.clip_hi.resize(2 * n_uav);
  for (int i = 0; i < n_uav; ++i) {
    s.hi(i) = two_pi;
    s.clip_hi(i) = std::nextafter(two_pi, 0.0);  // keep [0, 2*pi) half-open
    s.hi(n_uav + i) = d_max;
    s.clip_hi(n_uav + i) = d_max;
  }
  return s;
}

Vector ActionSpace::clip(const Vector& a) const {
  if (a.size() != lo.size())
    throw std::invalid_argument("action dimension mismatch");
  return a.cwiseMax(lo).cwiseMin(clip_hi);
}

Matrix ActionSpace::squash(const Matrix& z, Matrix* tanh_cache) const {
  if (z.rows() != lo.size())
    throw std::invalid_argument("action dimension mismatch");
  const Matrix t = z.array().tanh().matrix();
  if (tanh_cache != nullptr) *tanh_cache = t;
  Matrix y(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double center = (hi(i) + lo(i)) / 2.0;
    const double half = (hi(i) - lo(i)) / 2.0;
    y.row(i) = (center + half * t.row(i).array())
                   .min(clip_hi(i))
                   .max(lo(i))
                   .matrix();
  }
  return y;
}

Matrix ActionSpace::squash_backward(const Matrix& tanh_z,
                                    const Matrix& dy) const {
  if (tanh_z.rows() != lo.size() || dy.rows() != lo.size() ||
      tanh_z.cols() != dy.cols())
    throw std::invalid_argument("squash backward shape mismatch");
  Matrix dz(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    const double half = (hi(i) - lo(i)) / 2.0;
    dz.row(i) = dy.row(i).array() * half *
                (1.0 - tanh_z.row(i).array().square());
  }
  return dz;
}

}  // namespace uavnet
