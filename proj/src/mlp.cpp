#include "uavnet/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace uavnet {

namespace {

void fill_uniform(Matrix& m, Rng& rng, double bound) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rng.uniform(-bound, bound);
}

void fill_uniform(Vector& v, Rng& rng, double bound) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(-bound, bound);
}

bool finite(const Gradients& g) {
  for (const auto& m : g.w)
    if (!m.allFinite()) return false;
  for (const auto& v : g.b)
    if (!v.allFinite()) return false;
  return true;
}

}  // namespace

Mlp Mlp::create(int in, const std::vector<int>& hidden, int out, Rng& rng,
                double final_scale) {
  if (in <= 0 || out <= 0) throw std::invalid_argument("bad net dimensions");
  std::vector<int> dims;
  dims.push_back(in);
  for (int h : hidden) {
    if (h <= 0) throw std::invalid_argument("bad hidden width");
    dims.push_back(h);
  }
  dims.push_back(out);

  Mlp net;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    layer.w.resize(dims[l + 1], dims[l]);
    layer.b.resize(dims[l + 1]);
    const bool last = l + 2 == dims.size();
    const double bound = (last && final_scale > 0.0)
                             ? final_scale
                             : 1.0 / std::sqrt(static_cast<double>(dims[l]));
    fill_uniform(layer.w, rng, bound);
    fill_uniform(layer.b, rng, bound);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Matrix Mlp::forward(const Matrix& x) const {
  ForwardCache cache;
  return forward(x, cache);
}

Matrix Mlp::forward(const Matrix& x, ForwardCache& cache) const {
  if (layers.empty()) throw std::logic_error("forward on an empty net");
  if (x.rows() != input_dim())
    throw std::invalid_argument("input dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("non-finite network input");
  eval_cols += x.cols();

  cache.input = x;
  cache.pre.clear();
  cache.act.clear();
  Matrix a = x;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Matrix z = (layers[l].w * a).colwise() + layers[l].b;
    a = (l + 1 == layers.size()) ? z : z.cwiseMax(0.0);
    cache.pre.push_back(std::move(z));
    cache.act.push_back(a);
  }
  return cache.act.back();
}

Gradients Mlp::backward(const ForwardCache& cache, const Matrix& upstream,
                        Matrix* input_grad) const {
  if (cache.pre.size() != layers.size())
    throw std::invalid_argument("stale forward cache");
  if (upstream.rows() != output_dim() ||
      upstream.cols() != cache.input.cols())
    throw std::invalid_argument("upstream gradient shape mismatch");

  Gradients g;
  g.w.resize(layers.size());
  g.b.resize(layers.size());

  Matrix delta = upstream;  // identity output layer
  for (int l = static_cast<int>(layers.size()) - 1; l >= 0; --l) {
    if (l + 1 < static_cast<int>(layers.size())) {
      // ReLU mask; the derivative at exactly 0 is taken as 0
      delta = delta.cwiseProduct(
          (cache.pre[static_cast<std::size_t>(l)].array() > 0.0)
              .cast<double>()
              .matrix());
    }
    const Matrix& below =
        l == 0 ? cache.input : cache.act[static_cast<std::size_t>(l - 1)];
    g.w[static_cast<std::size_t>(l)] = delta * below.transpose();
    g.b[static_cast<std::size_t>(l)] = delta.rowwise().sum();
    if (l > 0 || input_grad != nullptr) {
      Matrix next = layers[static_cast<std::size_t>(l)].w.transpose() * delta;
      if (l == 0) {
        *input_grad = std::move(next);
      } else {
        delta = std::move(next);
      }
    }
  }
  return g;
}

void soft_update(const Mlp& main, Mlp& target, double tau) {
  if (main.layers.size() != target.layers.size())
    throw std::invalid_argument("net shapes differ");
  for (std::size_t l = 0; l < main.layers.size(); ++l) {
    if (main.layers[l].w.rows() != target.layers[l].w.rows() ||
        main.layers[l].w.cols() != target.layers[l].w.cols())
      throw std::invalid_argument("net shapes differ");
    target.layers[l].w = tau * main.layers[l].w + (1.0 - tau) * target.layers[l].w;
    target.layers[l].b = tau * main.layers[l].b + (1.0 - tau) * target.layers[l].b;
  }
}

Gradients zero_gradients(const Mlp& net) {
  Gradients g;
  for (const auto& layer : net.layers) {
    g.w.push_back(Matrix::Zero(layer.w.rows(), layer.w.cols()));
    g.b.push_back(Vector::Zero(layer.b.size()));
  }
  return g;
}

bool Adam::step(Mlp& net, const Gradients& g) {
  if (g.w.size() != net.layers.size())
    throw std::invalid_argument("gradient/net layer count mismatch");
  if (!finite(g)) return false;

  if (mw_.empty()) {
    for (const auto& layer : net.layers) {
      mw_.push_back(Matrix::Zero(layer.w.rows(), layer.w.cols()));
      vw_.push_back(Matrix::Zero(layer.w.rows(), layer.w.cols()));
      mb_.push_back(Vector::Zero(layer.b.size()));
      vb_.push_back(Vector::Zero(layer.b.size()));
    }
  }

  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const Matrix gw = g.w[l] + l2_ * net.layers[l].w;
    mw_[l] = beta1_ * mw_[l] + (1.0 - beta1_) * gw;
    vw_[l] = beta2_ * vw_[l].array().matrix() +
             (1.0 - beta2_) * gw.array().square().matrix();
    net.layers[l].w.array() -=
        lr_ * (mw_[l].array() / c1) / ((vw_[l].array() / c2).sqrt() + eps_);

    mb_[l] = beta1_ * mb_[l] + (1.0 - beta1_) * g.b[l];
    vb_[l] = beta2_ * vb_[l].array().matrix() +
             (1.0 - beta2_) * g.b[l].array().square().matrix();
    net.layers[l].b.array() -=
        lr_ * (mb_[l].array() / c1) / ((vb_[l].array() / c2).sqrt() + eps_);
  }
  return true;
}

Vector Normalizer::normalize(const Vector& x) const {
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    y(i) = hi(i) > lo(i) ? (x(i) - lo(i)) / (hi(i) - lo(i)) * 2.0 - 1.0 : 0.0;
  return y;
}

Matrix Normalizer::normalize_cols(const Matrix& x) const {
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (hi(i) > lo(i)) {
      y.row(i) = (x.row(i).array() - lo(i)) / (hi(i) - lo(i)) * 2.0 - 1.0;
    } else {
      y.row(i).setZero();
    }
  }
  return y;
}

Vector Normalizer::denormalize(const Vector& y) const {
  Vector x(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    x(i) = hi(i) > lo(i) ? lo(i) + (y(i) + 1.0) / 2.0 * (hi(i) - lo(i)) : lo(i);
  return x;
}

Vector Normalizer::slope() const {
  Vector s(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    s(i) = hi(i) > lo(i) ? 2.0 / (hi(i) - lo(i)) : 0.0;
  return s;
}

}  // namespace uavnet
