#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "swing/net.hpp"
#include "swing/rng.hpp"

using namespace swing;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd gaussian_states(int M, int d, std::uint64_t seed, std::uint16_t date = 0) {
  MatrixXd s(M, d);
  CounterRng rng(seed, StreamPurpose::PathsTrain, 0, date);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < d; ++j) s(i, j) = rng.next_normal();
  return s;
}

struct FdProblem {
  MultitaskNet net;
  MatrixXd states, psi_plus, psi_minus;
  VectorXd task_m, weights;
};

FdProblem make_problem(MultitaskNet::Kind kind, std::uint64_t seed, int d = 2, int I = 3,
                       int width = 5, int M = 16) {
  if (kind == MultitaskNet::Kind::Scalar) I = 1;
  FdProblem p{MultitaskNet(kind, d, I, width), gaussian_states(M, d, seed), MatrixXd(M, I),
              MatrixXd(M, I), VectorXd(I), VectorXd(I)};
  p.net.init_params(seed, 0);
  CounterRng rng(seed + 1, StreamPurpose::PathsValidation, 0, 0);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < I; ++j) {
      p.psi_plus(i, j) = 2.0 * rng.next_normal();
      p.psi_minus(i, j) = 2.0 * rng.next_normal();
    }
  for (int j = 0; j < I; ++j) {
    p.task_m(j) = rng.next_uniform();
    p.weights(j) = 0.25 + rng.next_uniform();
  }
  return p;
}

// Central finite difference of the frozen-stats weighted loss.
VectorXd fd_gradient(FdProblem& p, double h) {
  const VectorXd theta = p.net.pack();
  VectorXd g(theta.size());
  for (int j = 0; j < theta.size(); ++j) {
    VectorXd up = theta, dn = theta;
    up(j) += h;
    dn(j) -= h;
    p.net.unpack(up);
    const double fu = p.net.weighted_loss_no_update(p.states, p.task_m, p.psi_plus, p.psi_minus,
                                                    p.weights);
    p.net.unpack(dn);
    const double fd = p.net.weighted_loss_no_update(p.states, p.task_m, p.psi_plus, p.psi_minus,
                                                    p.weights);
    g(j) = (fu - fd) / (2.0 * h);
  }
  p.net.unpack(theta);
  return g;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1e-3, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("analytic gradient matches finite differences") {
  // ReLU kinks make FD unreliable, so batches whose smallest |preactivation|
  // is under 5e-3 are redrawn.
  const double h = 1e-4;
  int tested = 0;
  for (std::uint64_t seed = 0; seed < 40 && tested < 20; ++seed) {
    for (auto kind : {MultitaskNet::Kind::Multitask, MultitaskNet::Kind::Scalar}) {
      FdProblem p = make_problem(kind, seed);
      if (p.net.min_relu_input_magnitude(p.states) < 5e-3) continue;
      LossGrad lg = p.net.loss_and_gradients(p.states, p.task_m, p.psi_plus, p.psi_minus,
                                             p.weights, false);
      // loss_and_gradients updated running stats; rebuild the exact state for FD
      FdProblem q = make_problem(kind, seed);
      VectorXd fd = fd_gradient(q, h);
      REQUIRE(lg.grad.size() == fd.size());
      double worst = 0.0;
      for (int j = 0; j < fd.size(); ++j) worst = std::max(worst, rel_err(lg.grad(j), fd(j)));
      CAPTURE(seed);
      CHECK(worst <= 1e-4);
      // weighted loss identity: grad is of sum_i w_i L_i
      const double direct =
          q.net.weighted_loss_no_update(q.states, q.task_m, q.psi_plus, q.psi_minus, q.weights);
      CHECK(lg.task_losses.dot(p.weights) == doctest::Approx(direct).epsilon(1e-10));
      ++tested;
    }
  }
  REQUIRE(tested >= 20);
}

TEST_CASE("per-task gradient norms decompose the shared-layer gradient") {
  // With unit weight on one task and zero on the rest, the full gradient at the
  // last shared layer must have norm equal to that task's reported norm.
  FdProblem p = make_problem(MultitaskNet::Kind::Multitask, 3);
  const int I = int(p.weights.size());
  LossGrad all = p.net.loss_and_gradients(p.states, p.task_m, p.psi_plus, p.psi_minus,
                                          p.weights, true);
  REQUIRE(all.task_grad_norms.size() == I);
  for (int i = 0; i < I; ++i) {
    FdProblem q = make_problem(MultitaskNet::Kind::Multitask, 3);
    VectorXd onehot = VectorXd::Zero(I);
    onehot(i) = p.weights(i);
    LossGrad lone = q.net.loss_and_gradients(q.states, q.task_m, q.psi_plus, q.psi_minus,
                                             onehot, true);
    // locate the last shared affine weights in the flat layout: bn0(2d) +
    // W1(w*d) + b1(w) + bn1(2w) is the prefix, W2 is w*w entries after it
    const int d = q.net.input_dim(), w = q.net.width();
    const int off = 2 * d + w * d + w + 2 * w;
    const double direct_norm = lone.grad.segment(off, w * w).norm();
    CHECK(lone.task_grad_norms(i) == doctest::Approx(direct_norm).epsilon(1e-10));
    // and the norm is invariant to the other tasks' weights
    CHECK(all.task_grad_norms(i) == doctest::Approx(direct_norm).epsilon(1e-10));
  }
  // zero weight kills the task's norm
  FdProblem z = make_problem(MultitaskNet::Kind::Multitask, 3);
  VectorXd w0 = p.weights;
  w0(1) = 0.0;
  LossGrad lg = z.net.loss_and_gradients(z.states, z.task_m, z.psi_plus, z.psi_minus, w0, true);
  CHECK(lg.task_grad_norms(1) == 0.0);
}

TEST_CASE("matched branch payoffs give exactly zero gradient") {
  FdProblem p = make_problem(MultitaskNet::Kind::Multitask, 5);
  LossGrad lg = p.net.loss_and_gradients(p.states, p.task_m, p.psi_plus, p.psi_plus,
                                         p.weights, true);
  CHECK(lg.grad.cwiseAbs().maxCoeff() == 0.0);
  CHECK(lg.task_grad_norms.cwiseAbs().maxCoeff() == 0.0);
  // and the loss reduces to -mean psi+
  for (int i = 0; i < 3; ++i)
    CHECK(lg.task_losses(i) == doctest::Approx(-p.psi_plus.col(i).mean()).epsilon(1e-12));
}

TEST_CASE("decisions sit strictly inside (0,1) and start at one half") {
  // Zero-initialized heads give logit 0 for every task.
  MultitaskNet net(MultitaskNet::Kind::Multitask, 2, 4, 8);
  MatrixXd states = gaussian_states(32, 2, 11);
  VectorXd m = VectorXd::LinSpaced(4, 0.0, 1.0);
  MatrixXd f = net.forward_decisions(states, m, true);
  CHECK((f.array() == 0.5).all());

  // After init, outputs stay in the open interval even for wild inputs.
  net.init_params(11, 0);
  MatrixXd wild = 50.0 * gaussian_states(64, 2, 12);
  MatrixXd fw = net.forward_decisions(wild, m, true);
  CHECK((fw.array() > 0.0).all());
  CHECK((fw.array() < 1.0).all());
}

TEST_CASE("eval mode is deterministic and side-effect free") {
  MultitaskNet net(MultitaskNet::Kind::Multitask, 3, 2, 10);
  net.init_params(4, 7);
  // accumulate some running stats first
  VectorXd m(2);
  m << 0.3, 0.9;
  (void)net.forward_decisions(gaussian_states(64, 3, 1), m, true);
  const VectorXd stats = net.pack_running_stats();
  MatrixXd x = gaussian_states(16, 3, 2);
  MatrixXd f1 = net.forward_decisions(x, m, false);
  MatrixXd f2 = net.forward_decisions(x, m, false);
  CHECK((f1 - f2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((net.pack_running_stats() - stats).cwiseAbs().maxCoeff() == 0.0);

  // train mode does move the stats
  (void)net.forward_decisions(x, m, true);
  CHECK((net.pack_running_stats() - stats).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("eval trunk plus collapsed heads reproduce forward decisions") {
  MultitaskNet net(MultitaskNet::Kind::Multitask, 2, 3, 12);
  net.init_params(21, 3);
  VectorXd m(3);
  m << 0.1, 0.5, 0.8;
  (void)net.forward_decisions(gaussian_states(128, 2, 5), m, true);  // warm stats
  MatrixXd x = gaussian_states(40, 2, 6);
  MatrixXd f = net.forward_decisions(x, m, false);
  MatrixXd trunk = net.eval_trunk(x);
  MatrixXd logits = net.eval_logits_from_trunk(trunk, m);
  for (int i = 0; i < 3; ++i) {
    VectorXd u;
    double b;
    net.collapsed_head(i, m(i), u, b);
    for (int r = 0; r < x.rows(); ++r) {
      const double logit = trunk.row(r).dot(u) + b;
      CHECK(logit == doctest::Approx(logits(r, i)).epsilon(1e-12));
      // decision equals sigmoid agreement: sign(logit) decides f vs 1/2
      CHECK((f(r, i) >= 0.5) == (logit >= 0.0));
      CHECK(1.0 / (1.0 + std::exp(-logit)) == doctest::Approx(f(r, i)).epsilon(1e-9));
    }
  }
}

TEST_CASE("train mode needs at least two rows") {
  MultitaskNet net(MultitaskNet::Kind::Multitask, 2, 2, 6);
  net.init_params(1, 0);
  MatrixXd one = gaussian_states(1, 2, 3);
  VectorXd m(2);
  m << 0.2, 0.6;
  CHECK_THROWS_AS((void)net.forward_decisions(one, m, true), std::invalid_argument);
}

TEST_CASE("adam bias correction: first step with zero betas") {
  VectorXd p = VectorXd::Zero(3);
  VectorXd g = VectorXd::Ones(3);
  AdamState st;
  st.beta1 = 0.0;
  st.beta2 = 0.0;
  st.init(3);
  adam_step(p, g, st, 0.1);
  // m = g, v = g^2, update = -lr * g / (|g| + eps)
  CHECK(p(0) == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-14));

  // default betas, two identical steps shrink the step only via bias correction
  VectorXd q = VectorXd::Zero(1);
  AdamState st2;
  st2.init(1);
  VectorXd g1 = VectorXd::Constant(1, 2.0);
  adam_step(q, g1, st2, 0.01);
  // bias-corrected first step is -lr * g / (|g| + eps') ~ -lr regardless of scale
  CHECK(q(0) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(st2.t == 1);
}

TEST_CASE("pack and unpack round-trip bit for bit") {
  for (auto kind : {MultitaskNet::Kind::Multitask, MultitaskNet::Kind::Scalar}) {
    MultitaskNet net(kind, 3, kind == MultitaskNet::Kind::Scalar ? 1 : 4, 9);
    net.init_params(33, 5);
    VectorXd m = VectorXd::Constant(net.task_count(), 0.4);
    (void)net.forward_decisions(gaussian_states(32, 3, 8), m, true);
    const VectorXd theta = net.pack();
    const VectorXd stats = net.pack_running_stats();
    CHECK(theta.size() == net.param_count());
    MultitaskNet other(kind, 3, net.task_count(), 9);
    other.unpack(theta);
    other.unpack_running_stats(stats);
    CHECK((other.pack() - theta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((other.pack_running_stats() - stats).cwiseAbs().maxCoeff() == 0.0);
    MatrixXd x = gaussian_states(8, 3, 9);
    CHECK((other.forward_decisions(x, m, false) - net.forward_decisions(x, m, false))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("init is seeded and head-count invariant on the trunk") {
  MultitaskNet a(MultitaskNet::Kind::Multitask, 2, 3, 7);
  MultitaskNet b(MultitaskNet::Kind::Multitask, 2, 3, 7);
  a.init_params(99, 12);
  b.init_params(99, 12);
  CHECK((a.pack() - b.pack()).cwiseAbs().maxCoeff() == 0.0);
  b.init_params(99, 13);  // different date, different draw
  CHECK((a.pack() - b.pack()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("trunk transfer copies shared layers and preserves head behavior") {
  MultitaskNet src(MultitaskNet::Kind::Multitask, 2, 5, 8);
  src.init_params(3, 20);
  VectorXd ms = VectorXd::Constant(5, 0.5);
  (void)src.forward_decisions(gaussian_states(64, 2, 1), ms, true);

  MultitaskNet dst(MultitaskNet::Kind::Multitask, 2, 2, 8);  // different head count
  dst.init_params(3, 19);
  dst.transfer_shared_from(src);

  // same trunk output on any input
  MatrixXd x = gaussian_states(16, 2, 4);
  CHECK((dst.eval_trunk(x) - src.eval_trunk(x)).cwiseAbs().maxCoeff() == 0.0);

  // heads were freshly initialized, not copied: logits differ from src's
  MultitaskNet ref(MultitaskNet::Kind::Multitask, 2, 2, 8);
  ref.init_params(3, 19);
  VectorXd m2 = VectorXd::Constant(2, 0.5);
  VectorXd u_ref, u_dst;
  double b_ref, b_dst;
  ref.collapsed_head(1, 0.5, u_ref, b_ref);
  dst.collapsed_head(1, 0.5, u_dst, b_dst);
  CHECK((u_ref - u_dst).cwiseAbs().maxCoeff() == 0.0);
  CHECK(b_ref == b_dst);

  // shape mismatch is rejected
  MultitaskNet narrow(MultitaskNet::Kind::Multitask, 2, 2, 6);
  CHECK_THROWS_AS(narrow.transfer_shared_from(src), std::invalid_argument);
}

TEST_CASE("remaining-capacity feature normalizes by contract type") {
  VolumeConstraints firm{0, 1, 20, 25, 30, true};
  CHECK(task_feature_m(firm, 20) == doctest::Approx(0.0));
  CHECK(task_feature_m(firm, 25) == doctest::Approx(1.0));
  CHECK(task_feature_m(firm, 22) == doctest::Approx(0.4));
  VolumeConstraints pen{0, 1, 0, 0, 30, false};
  CHECK(task_feature_m(pen, 0) == doctest::Approx(0.0));
  CHECK(task_feature_m(pen, 30) == doctest::Approx(1.0));
  CHECK(task_feature_m(pen, 15) == doctest::Approx(0.5));
}
