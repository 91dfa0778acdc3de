#include <cmath>
#include <cstdio>
#include <vector>

#include "doctest.h"
#include "fd_check.hpp"
#include "uavnet/action_space.hpp"
#include "uavnet/checkpoint.hpp"
#include "uavnet/mlp.hpp"

using namespace uavnet;

namespace {

// Straight-line recomputation of the forward pass with plain loops; the
// matrix library must agree with this to float accumulation error.
std::vector<double> straight_forward(const Mlp& net,
                                     const std::vector<double>& x) {
  std::vector<double> a = x;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    std::vector<double> z(static_cast<std::size_t>(layer.w.rows()));
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i) {
      double s = layer.b(i);
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j)
        s += layer.w(i, j) * a[static_cast<std::size_t>(j)];
      z[static_cast<std::size_t>(i)] =
          (l + 1 == net.layers.size()) ? s : std::max(0.0, s);
    }
    a = std::move(z);
  }
  return a;
}

Matrix random_input(int rows, int cols, Rng& rng, double scale = 1.0) {
  Matrix x(rows, cols);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      x(i, j) = rng.uniform(-scale, scale);
  return x;
}

}  // namespace

TEST_CASE("zero net maps everything to zero") {
  Mlp net;
  net.layers.push_back({Matrix::Zero(4, 3), Vector::Zero(4)});
  net.layers.push_back({Matrix::Zero(2, 4), Vector::Zero(2)});
  Rng rng(1);
  const Matrix y = net.forward(random_input(3, 5, rng));
  CHECK(y.isZero(0.0));
}

TEST_CASE("identity net with a symmetric head is tanh") {
  Mlp net;
  net.layers.push_back({Matrix::Identity(1, 1), Vector::Zero(1)});
  ActionSpace box;
  box.lo = Vector::Constant(1, -1.0);
  box.hi = Vector::Constant(1, 1.0);
  box.clip_hi = box.hi;
  for (double x : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
    Matrix in(1, 1);
    in(0, 0) = x;
    const Matrix y = box.squash(net.forward(in));
    CHECK(y(0, 0) == doctest::Approx(std::tanh(x)).epsilon(1e-15));
  }
}

TEST_CASE("forward agrees with a straight-line recomputation") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const Mlp net = Mlp::create(6, {8, 7}, 4, rng);
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    Matrix xm(6, 1);
    for (int i = 0; i < 6; ++i) xm(i, 0) = x[static_cast<std::size_t>(i)];

    const Matrix y = net.forward(xm);
    const auto ref = straight_forward(net, x);
    for (int i = 0; i < 4; ++i)
      CHECK(y(i, 0) ==
            doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("forward rejects bad input") {
  Rng rng(3);
  const Mlp net = Mlp::create(3, {4}, 2, rng);
  CHECK_THROWS_AS(net.forward(Matrix::Zero(5, 1)), std::invalid_argument);
  Matrix nan_in = Matrix::Zero(3, 1);
  nan_in(1, 0) = std::nan("");
  CHECK_THROWS_AS(net.forward(nan_in), std::invalid_argument);
}

TEST_CASE("instrumentation counts forward samples") {
  Rng rng(4);
  const Mlp net = Mlp::create(3, {4}, 2, rng);
  CHECK(net.eval_cols == 0);
  net.forward(random_input(3, 7, rng));
  CHECK(net.eval_cols == 7);
  net.forward(random_input(3, 2, rng));
  CHECK(net.eval_cols == 9);
}

TEST_CASE("input gradient of a linear layer is the transposed weight action") {
  Rng rng(5);
  Mlp net;
  Matrix w = random_input(3, 4, rng);
  net.layers.push_back({w, Vector::Zero(3)});
  ForwardCache cache;
  const Matrix x = random_input(4, 1, rng);
  net.forward(x, cache);
  Matrix upstream = random_input(3, 1, rng);
  Matrix dx;
  net.backward(cache, upstream, &dx);
  const Matrix expect = w.transpose() * upstream;
  CHECK((dx - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(2024);
  double worst_param = 0.0, worst_input = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    Mlp net = Mlp::create(5, {8, 6}, 3, rng);
    // random linear projection makes the loss scalar but keeps every output
    const Matrix proj = random_input(3, 1, rng);

    Matrix x;
    ForwardCache cache;
    do {
      x = random_input(5, 3, rng);
      net.forward(x, cache);
    } while (!testcheck::away_from_kinks(cache));

    const Matrix upstream = proj * Matrix::Ones(1, x.cols());
    Matrix dx;
    const Gradients g = net.backward(cache, upstream, &dx);

    auto loss = [&]() { return (proj.transpose() * net.forward(x)).sum(); };
    worst_param =
        std::max(worst_param, testcheck::max_param_fd_error(net, g, loss));

    // input gradient, column by column
    for (Eigen::Index colidx = 0; colidx < x.cols(); ++colidx) {
      Vector xc = x.col(colidx);
      auto col_loss = [&]() {
        return (proj.transpose() * net.forward(xc)).sum();
      };
      Vector analytic = dx.col(colidx);
      worst_input = std::max(
          worst_input, testcheck::max_input_fd_error(xc, analytic, col_loss));
    }
  }
  CHECK(worst_param < 1e-5);
  CHECK(worst_input < 1e-5);
}

TEST_CASE("gradients chain exactly through the squashing head") {
  Rng rng(99);
  const ActionSpace box = ActionSpace::uav_actions(2, 1.0);
  Mlp net = Mlp::create(6, {8}, box.dim(), rng);
  const Matrix proj = random_input(box.dim(), 1, rng);

  Matrix x;
  ForwardCache cache;
  do {
    x = random_input(6, 2, rng);
    net.forward(x, cache);
  } while (!testcheck::away_from_kinks(cache));

  Matrix tanh_cache;
  box.squash(net.forward(x, cache), &tanh_cache);
  const Matrix dy = proj * Matrix::Ones(1, x.cols());
  const Gradients g =
      net.backward(cache, box.squash_backward(tanh_cache, dy), nullptr);

  auto loss = [&]() {
    return (proj.transpose() * box.squash(net.forward(x))).sum();
  };
  CHECK(testcheck::max_param_fd_error(net, g, loss) < 1e-5);
}

TEST_CASE("optimizer leaves parameters alone without a signal") {
  Rng rng(6);
  Mlp net = Mlp::create(3, {4}, 2, rng);
  const Mlp before = net;
  Adam opt(1e-2, 0.0);
  CHECK(opt.step(net, zero_gradients(net)));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(net.layers[l].w == before.layers[l].w);
    CHECK(net.layers[l].b == before.layers[l].b);
  }
}

TEST_CASE("optimizer rejects non-finite gradients") {
  Rng rng(7);
  Mlp net = Mlp::create(3, {4}, 2, rng);
  const Mlp before = net;
  Adam opt(1e-2, 0.0);
  Gradients g = zero_gradients(net);
  g.w[0](0, 0) = std::nan("");
  CHECK_FALSE(opt.step(net, g));
  CHECK(net.layers[0].w == before.layers[0].w);
}

TEST_CASE("one-parameter quadratic converges") {
  Mlp net;
  net.layers.push_back({Matrix::Constant(1, 1, -0.8), Vector::Zero(1)});
  Adam opt(1e-2, 0.0);
  // minimize (w - 3)^2 via its gradient 2(w - 3)
  for (int i = 0; i < 10000; ++i) {
    Gradients g = zero_gradients(net);
    g.w[0](0, 0) = 2.0 * (net.layers[0].w(0, 0) - 3.0);
    opt.step(net, g);
    if (std::abs(net.layers[0].w(0, 0) - 3.0) < 1e-4) break;
  }
  CHECK(net.layers[0].w(0, 0) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("pure L2 shrinks weights and skips biases") {
  Mlp net;
  net.layers.push_back({Matrix::Constant(1, 1, 2.0), Vector::Constant(1, 1.5)});
  Adam opt(1e-3, 1e-2);
  double prev = 2.0;
  for (int i = 0; i < 50; ++i) {
    opt.step(net, zero_gradients(net));
    const double w = net.layers[0].w(0, 0);
    CHECK(std::abs(w) < std::abs(prev));
    prev = w;
  }
  CHECK(net.layers[0].b(0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("soft update lag") {
  Rng rng(8);
  const Mlp main = Mlp::create(3, {4}, 2, rng);
  Mlp target = Mlp::create(3, {4}, 2, rng);

  Mlp t1 = target;
  soft_update(main, t1, 1.0);
  for (std::size_t l = 0; l < main.layers.size(); ++l)
    CHECK(t1.layers[l].w == main.layers[l].w);

  Mlp t0 = target;
  soft_update(main, t0, 0.0);
  for (std::size_t l = 0; l < main.layers.size(); ++l)
    CHECK(t0.layers[l].w == target.layers[l].w);

  // scalar case: main 1, target 0, tau 0.001 -> 0.001
  Mlp a, b;
  a.layers.push_back({Matrix::Constant(1, 1, 1.0), Vector::Zero(1)});
  b.layers.push_back({Matrix::Constant(1, 1, 0.0), Vector::Zero(1)});
  soft_update(a, b, 0.001);
  CHECK(b.layers[0].w(0, 0) == doctest::Approx(0.001).epsilon(1e-15));
}

TEST_CASE("normalizer endpoints, midpoint, and round trip") {
  Normalizer norm;
  norm.lo = Vector::Zero(3);
  norm.hi = Vector::Zero(3);
  norm.lo << 0.0, 150.0, 5.0;
  norm.hi << 10.0, 500.0, 5.0;  // last component degenerate

  Vector x(3);
  x << 0.0, 325.0, 5.0;
  const Vector y = norm.normalize(x);
  CHECK(y(0) == doctest::Approx(-1.0));
  CHECK(y(1) == doctest::Approx(0.0));
  CHECK(y(2) == doctest::Approx(0.0));

  Vector top(3);
  top << 10.0, 500.0, 5.0;
  CHECK(norm.normalize(top)(0) == doctest::Approx(1.0));

  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    Vector s(3);
    s << rng.uniform(0.0, 10.0), rng.uniform(150.0, 500.0), 5.0;
    const Vector rt = norm.denormalize(norm.normalize(s));
    for (int k = 0; k < 3; ++k)
      CHECK(rt(k) == doctest::Approx(s(k)).epsilon(1e-12));
  }

  CHECK(norm.slope()(0) == doctest::Approx(0.2));
  CHECK(norm.slope()(2) == 0.0);

  // column-batch path matches the vector path
  Matrix batch(3, 2);
  batch.col(0) = x;
  batch.col(1) = top;
  const Matrix yb = norm.normalize_cols(batch);
  CHECK((yb.col(0) - norm.normalize(x)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((yb.col(1) - norm.normalize(top)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("action bounds hold under squashing and clipping") {
  Rng rng(10);
  const ActionSpace box = ActionSpace::uav_actions(3, 1.0);
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int i = 0; i < 10000; ++i) {
    Matrix z = random_input(box.dim(), 1, rng, 25.0);  // deep saturation too
    const Matrix y = box.squash(z);
    for (int k = 0; k < 3; ++k) {
      CHECK(y(k, 0) >= 0.0);
      CHECK(y(k, 0) < two_pi);  // strict: half-open angle channel
      CHECK(y(3 + k, 0) >= 0.0);
      CHECK(y(3 + k, 0) <= 1.0);
    }
  }
  // clip enforces the same bounds on noisy actions
  Vector wild(6);
  wild << 7.0, -1.0, two_pi, 0.5, 2.0, -0.2;
  const Vector c = box.clip(wild);
  CHECK(c(0) < two_pi);
  CHECK(c(1) == 0.0);
  CHECK(c(2) < two_pi);
  CHECK(c(4) == 1.0);
  CHECK(c(5) == 0.0);
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  Rng rng(11);
  Checkpoint ckpt;
  ckpt.mode = 1;
  ckpt.dynamic_users = true;
  ckpt.n_uav = 2;
  ckpt.actions = ActionSpace::uav_actions(2, 1.0);
  ckpt.state_norm.lo = Vector::Zero(6);
  ckpt.state_norm.hi = Vector::Constant(6, 10.0);
  ckpt.actor = Mlp::create(6, {8, 7}, 4, rng, 3e-3);
  ckpt.critic = Mlp::create(10, {8, 7}, 1, rng);
  ckpt.actor_target = ckpt.actor;
  ckpt.critic_target = ckpt.critic;

  const std::string path = "/tmp/uavnet_test_ckpt.bin";
  save_checkpoint(ckpt, path);
  const Checkpoint back = load_checkpoint(path);
  std::remove(path.c_str());

  CHECK(back.mode == 1);
  CHECK(back.dynamic_users);
  CHECK(back.n_uav == 2);
  CHECK(back.state_norm.lo == ckpt.state_norm.lo);
  CHECK(back.state_norm.hi == ckpt.state_norm.hi);
  CHECK(back.actions.clip_hi == ckpt.actions.clip_hi);
  REQUIRE(back.actor.layers.size() == ckpt.actor.layers.size());
  for (std::size_t l = 0; l < ckpt.actor.layers.size(); ++l) {
    CHECK(back.actor.layers[l].w == ckpt.actor.layers[l].w);  // bitwise
    CHECK(back.actor.layers[l].b == ckpt.actor.layers[l].b);
  }
  for (std::size_t l = 0; l < ckpt.critic.layers.size(); ++l)
    CHECK(back.critic.layers[l].w == ckpt.critic.layers[l].w);

  CHECK_THROWS_AS(load_checkpoint("/tmp/uavnet_missing.bin"), CheckpointError);
}
