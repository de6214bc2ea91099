#include "swing/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swing {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Stable logistic, elementwise; output clamped inside the open unit interval
// so downstream code may rely on f in (0,1) even at saturated logits.
MatrixXd sigmoid(const MatrixXd& x) {
  MatrixXd f(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double z = x(i, j);
      double e = std::exp(-std::abs(z));
      double v = z >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      f(i, j) = std::min(std::max(v, 1e-300), 1.0 - 1e-16);
    }
  return f;
}

void check_finite(const MatrixXd& x, const char* where) {
  if (!x.allFinite())
    throw std::runtime_error(std::string("non-finite values at ") + where);
}

// Train-mode BN on columns; fills normalized output and the stats needed for
// both the backward pass and the running-stat update.
void bn_forward_train(const BatchNorm& bn, const MatrixXd& x, MatrixXd& xhat, MatrixXd& y,
                      VectorXd& istd, VectorXd& bmean, VectorXd& bvar) {
  bmean = x.colwise().mean();
  MatrixXd centered = x.rowwise() - bmean.transpose();
  bvar = centered.array().square().colwise().mean();
  istd = (bvar.array() + bn.eps).sqrt().inverse();
  xhat = centered.array().rowwise() * istd.transpose().array();
  y = (xhat.array().rowwise() * bn.gamma.transpose().array()).rowwise() +
      bn.beta.transpose().array();
}

void bn_forward_eval(const BatchNorm& bn, const MatrixXd& x, MatrixXd& y) {
  Eigen::ArrayXd istd = (bn.run_var.array() + bn.eps).sqrt().inverse();
  y = (((x.rowwise() - bn.run_mean.transpose()).array().rowwise() * istd.transpose()).rowwise() *
       bn.gamma.transpose().array())
          .rowwise() +
      bn.beta.transpose().array();
}

// dL/dx for train-mode BN given dL/dy; batch mean and the biased batch
// variance both depend on x, which gives the three-term form.
void bn_backward_data(const BatchNorm& bn, const MatrixXd& dy, const MatrixXd& xhat,
                      const VectorXd& istd, MatrixXd& dx) {
  const double M = static_cast<double>(dy.rows());
  MatrixXd dxhat = dy.array().rowwise() * bn.gamma.transpose().array();
  Eigen::RowVectorXd sum_d = dxhat.colwise().sum();
  Eigen::RowVectorXd sum_dx = (dxhat.array() * xhat.array()).colwise().sum();
  dx = ((dxhat.array() * M).rowwise() - sum_d.array()).matrix();
  dx.array() -= xhat.array().rowwise() * sum_dx.array();
  dx = (dx.array().rowwise() * istd.transpose().array()) / M;
}

void bn_update_running(BatchNorm& bn, const VectorXd& bmean, const VectorXd& bvar, int M) {
  double unbias = static_cast<double>(M) / (static_cast<double>(M) - 1.0);
  bn.run_mean = (1.0 - bn.momentum) * bn.run_mean + bn.momentum * bmean;
  bn.run_var = (1.0 - bn.momentum) * bn.run_var + bn.momentum * (unbias * bvar);
}

// Shared cursor helpers keep pack/unpack/gradient layouts identical.
void put(VectorXd& out, int& pos, const double* src, int len) {
  std::copy(src, src + len, out.data() + pos);
  pos += len;
}
void get(const Eigen::Ref<const VectorXd>& in, int& pos, double* dst, int len) {
  std::copy(in.data() + pos, in.data() + pos + len, dst);
  pos += len;
}
void put_rows(VectorXd& out, int& pos, const MatrixXd& m) {
  VectorXd row(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    row = m.row(i).transpose();
    put(out, pos, row.data(), static_cast<int>(m.cols()));
  }
}

}  // namespace

double task_feature_m(const VolumeConstraints& c, int Q) {
  if (c.firm) return (static_cast<double>(Q) - c.Q_min) / (c.Q_max - c.Q_min);
  return static_cast<double>(Q) / (static_cast<double>(c.n) * c.q_max);
}

void BatchNorm::init(int dim) {
  gamma = VectorXd::Ones(dim);
  beta = VectorXd::Zero(dim);
  run_mean = VectorXd::Zero(dim);
  run_var = VectorXd::Ones(dim);
}

void AdamState::init(int dim) {
  m = VectorXd::Zero(dim);
  v = VectorXd::Zero(dim);
  t = 0;
}

void adam_step(VectorXd& params, const Eigen::Ref<const VectorXd>& grad, AdamState& state,
               double lr) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_step: size mismatch");
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = (state.beta2 * state.v.array() + (1.0 - state.beta2) * grad.array().square()).matrix();
  double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  params.array() -=
      lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + state.eps);
}

struct MultitaskNet::Cache {
  MatrixXd xhat0, y0;
  VectorXd istd0, bm0, bv0;
  MatrixXd xhat1, bn1_out, h1;
  VectorXd istd1, bm1, bv1;
  MatrixXd xhat2, bn2_out, h2;
  VectorXd istd2, bm2, bv2;
  MatrixXd U;       // tasks x width, collapsed head weights
  VectorXd head_b;  // tasks
  MatrixXd logits, f;
};

MultitaskNet::MultitaskNet(Kind kind, int input_dim, int task_count, int width)
    : kind_(kind), d_(input_dim), tasks_(task_count), width_(width) {
  if (input_dim < 1 || width < 1) throw std::invalid_argument("net: dims must be positive");
  if (task_count < 1) throw std::invalid_argument("net: need at least one task");
  if (kind == Kind::Scalar && task_count != 1)
    throw std::invalid_argument("net: scalar kind requires exactly one task");
  bn0_.init(d_);
  W1_ = MatrixXd::Zero(width_, d_);
  b1_ = VectorXd::Zero(width_);
  bn1_.init(width_);
  if (kind_ == Kind::Multitask) {
    W2_ = MatrixXd::Zero(width_, width_);
    b2_ = VectorXd::Zero(width_);
    bn2_.init(width_);
    head_A_.assign(tasks_, Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, width_));
    head_c_.assign(tasks_, Eigen::Vector2d::Zero());
  } else {
    out_w_ = VectorXd::Zero(width_);
    out_b_ = 0.0;
  }
}

void MultitaskNet::init_params(std::uint64_t seed, std::uint32_t date) {
  CounterRng rng(seed, StreamPurpose::NetInit, date, 0);
  auto he_row = [&](double* row, int fan_in, int len) {
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (int j = 0; j < len; ++j) row[j] = bound * (2.0 * rng.next_uniform() - 1.0);
  };
  VectorXd row(std::max(d_, width_));
  for (int i = 0; i < width_; ++i) {
    he_row(row.data(), d_, d_);
    W1_.row(i) = row.head(d_).transpose();
  }
  b1_.setZero();
  if (kind_ == Kind::Multitask) {
    for (int i = 0; i < width_; ++i) {
      he_row(row.data(), width_, width_);
      W2_.row(i) = row.head(width_).transpose();
    }
    b2_.setZero();
    for (int t = 0; t < tasks_; ++t) {
      he_row(row.data(), width_, width_);
      head_A_[t].row(0) = row.head(width_).transpose();
      he_row(row.data(), width_, width_);
      head_A_[t].row(1) = row.head(width_).transpose();
      head_c_[t].setZero();
    }
  } else {
    he_row(row.data(), width_, width_);
    out_w_ = row.head(width_);
    out_b_ = 0.0;
  }
  bn0_.init(d_);
  bn1_.init(width_);
  if (kind_ == Kind::Multitask) bn2_.init(width_);
}

int MultitaskNet::param_count() const {
  int n = 2 * d_ + width_ * d_ + width_ + 2 * width_;
  if (kind_ == Kind::Multitask)
    n += width_ * width_ + width_ + 2 * width_ + tasks_ * (2 * width_ + 2);
  else
    n += width_ + 1;
  return n;
}

Eigen::VectorXd MultitaskNet::pack() const {
  VectorXd p(param_count());
  int pos = 0;
  put(p, pos, bn0_.gamma.data(), d_);
  put(p, pos, bn0_.beta.data(), d_);
  put_rows(p, pos, W1_);
  put(p, pos, b1_.data(), width_);
  put(p, pos, bn1_.gamma.data(), width_);
  put(p, pos, bn1_.beta.data(), width_);
  if (kind_ == Kind::Multitask) {
    put_rows(p, pos, W2_);
    put(p, pos, b2_.data(), width_);
    put(p, pos, bn2_.gamma.data(), width_);
    put(p, pos, bn2_.beta.data(), width_);
    VectorXd row(width_);
    for (int t = 0; t < tasks_; ++t) {
      row = head_A_[t].row(0).transpose();
      put(p, pos, row.data(), width_);
      row = head_A_[t].row(1).transpose();
      put(p, pos, row.data(), width_);
      put(p, pos, head_c_[t].data(), 2);
    }
  } else {
    put(p, pos, out_w_.data(), width_);
    p(pos++) = out_b_;
  }
  return p;
}

void MultitaskNet::unpack(const Eigen::Ref<const VectorXd>& p) {
  if (p.size() != param_count()) throw std::invalid_argument("unpack: wrong parameter count");
  int pos = 0;
  get(p, pos, bn0_.gamma.data(), d_);
  get(p, pos, bn0_.beta.data(), d_);
  VectorXd row(std::max(d_, width_));
  for (int i = 0; i < width_; ++i) {
    get(p, pos, row.data(), d_);
    W1_.row(i) = row.head(d_).transpose();
  }
  get(p, pos, b1_.data(), width_);
  get(p, pos, bn1_.gamma.data(), width_);
  get(p, pos, bn1_.beta.data(), width_);
  if (kind_ == Kind::Multitask) {
    for (int i = 0; i < width_; ++i) {
      get(p, pos, row.data(), width_);
      W2_.row(i) = row.head(width_).transpose();
    }
    get(p, pos, b2_.data(), width_);
    get(p, pos, bn2_.gamma.data(), width_);
    get(p, pos, bn2_.beta.data(), width_);
    for (int t = 0; t < tasks_; ++t) {
      get(p, pos, row.data(), width_);
      head_A_[t].row(0) = row.head(width_).transpose();
      get(p, pos, row.data(), width_);
      head_A_[t].row(1) = row.head(width_).transpose();
      get(p, pos, head_c_[t].data(), 2);
    }
  } else {
    get(p, pos, out_w_.data(), width_);
    out_b_ = p(pos++);
  }
}

Eigen::VectorXd MultitaskNet::pack_running_stats() const {
  int n = 2 * d_ + 2 * width_ + (kind_ == Kind::Multitask ? 2 * width_ : 0);
  VectorXd s(n);
  int pos = 0;
  put(s, pos, bn0_.run_mean.data(), d_);
  put(s, pos, bn0_.run_var.data(), d_);
  put(s, pos, bn1_.run_mean.data(), width_);
  put(s, pos, bn1_.run_var.data(), width_);
  if (kind_ == Kind::Multitask) {
    put(s, pos, bn2_.run_mean.data(), width_);
    put(s, pos, bn2_.run_var.data(), width_);
  }
  return s;
}

void MultitaskNet::unpack_running_stats(const Eigen::Ref<const VectorXd>& s) {
  int n = 2 * d_ + 2 * width_ + (kind_ == Kind::Multitask ? 2 * width_ : 0);
  if (s.size() != n) throw std::invalid_argument("unpack_running_stats: wrong size");
  int pos = 0;
  get(s, pos, bn0_.run_mean.data(), d_);
  get(s, pos, bn0_.run_var.data(), d_);
  get(s, pos, bn1_.run_mean.data(), width_);
  get(s, pos, bn1_.run_var.data(), width_);
  if (kind_ == Kind::Multitask) {
    get(s, pos, bn2_.run_mean.data(), width_);
    get(s, pos, bn2_.run_var.data(), width_);
  }
}

void MultitaskNet::forward_core(const Eigen::Ref<const MatrixXd>& states,
                                const Eigen::Ref<const VectorXd>& task_m, bool train,
                                bool with_heads, Cache& c) const {
  if (states.cols() != d_) throw std::invalid_argument("forward: state dimension mismatch");
  if (with_heads && task_m.size() != tasks_)
    throw std::invalid_argument("forward: task feature count mismatch");
  if (train && states.rows() < 2)
    throw std::invalid_argument("forward: train mode needs a batch of at least 2 paths");

  if (train)
    bn_forward_train(bn0_, states, c.xhat0, c.y0, c.istd0, c.bm0, c.bv0);
  else
    bn_forward_eval(bn0_, states, c.y0);

  MatrixXd pre1 = (c.y0 * W1_.transpose()).rowwise() + b1_.transpose();
  if (train)
    bn_forward_train(bn1_, pre1, c.xhat1, c.bn1_out, c.istd1, c.bm1, c.bv1);
  else
    bn_forward_eval(bn1_, pre1, c.bn1_out);
  c.h1 = c.bn1_out.cwiseMax(0.0);

  if (kind_ == Kind::Multitask) {
    MatrixXd pre2 = (c.h1 * W2_.transpose()).rowwise() + b2_.transpose();
    if (train)
      bn_forward_train(bn2_, pre2, c.xhat2, c.bn2_out, c.istd2, c.bm2, c.bv2);
    else
      bn_forward_eval(bn2_, pre2, c.bn2_out);
    c.h2 = c.bn2_out.cwiseMax(0.0);
    if (!with_heads) return;
    c.U.resize(tasks_, width_);
    c.head_b.resize(tasks_);
    for (int t = 0; t < tasks_; ++t) {
      c.U.row(t) = task_m(t) * head_A_[t].row(0) + head_A_[t].row(1);
      c.head_b(t) = task_m(t) * head_c_[t](0) + head_c_[t](1);
    }
    c.logits = (c.h2 * c.U.transpose()).rowwise() + c.head_b.transpose();
  } else {
    if (!with_heads) return;
    c.logits = ((c.h1 * out_w_).array() + out_b_).matrix();
  }
  check_finite(c.logits, "logits");
  c.f = sigmoid(c.logits);
}

void MultitaskNet::commit_running_stats(const Cache& c, int M) {
  bn_update_running(bn0_, c.bm0, c.bv0, M);
  bn_update_running(bn1_, c.bm1, c.bv1, M);
  if (kind_ == Kind::Multitask) bn_update_running(bn2_, c.bm2, c.bv2, M);
}

Eigen::MatrixXd MultitaskNet::forward_decisions(const Eigen::Ref<const MatrixXd>& states,
                                                const Eigen::Ref<const VectorXd>& task_m,
                                                bool train) {
  Cache c;
  forward_core(states, task_m, train, true, c);
  if (train) commit_running_stats(c, static_cast<int>(states.rows()));
  return c.f;
}

LossGrad MultitaskNet::loss_and_gradients(const Eigen::Ref<const MatrixXd>& states,
                                          const Eigen::Ref<const VectorXd>& task_m,
                                          const Eigen::Ref<const MatrixXd>& psi_plus,
                                          const Eigen::Ref<const MatrixXd>& psi_minus,
                                          const Eigen::Ref<const VectorXd>& weights,
                                          bool want_task_grad_norms) {
  const int M = static_cast<int>(states.rows());
  if (psi_plus.rows() != M || psi_minus.rows() != M || psi_plus.cols() != tasks_ ||
      psi_minus.cols() != tasks_)
    throw std::invalid_argument("loss_and_gradients: payoff shape mismatch");
  if (weights.size() != tasks_)
    throw std::invalid_argument("loss_and_gradients: weight count mismatch");
  check_finite(psi_plus, "upper-branch payoffs");
  check_finite(psi_minus, "lower-branch payoffs");

  Cache c;
  forward_core(states, task_m, true, true, c);
  commit_running_stats(c, M);

  LossGrad out;
  // L_i = -mean_m[psi+ f + psi- (1 - f)]; maximizing expected reward.
  out.task_losses =
      -((psi_plus.array() * c.f.array() + psi_minus.array() * (1.0 - c.f.array()))
            .colwise()
            .mean())
           .matrix()
           .transpose();

  // dL_i/dlogit_i = -(psi+ - psi-) f (1-f) / M, columnwise.
  MatrixXd dlogit =
      (-(psi_plus.array() - psi_minus.array()) * c.f.array() * (1.0 - c.f.array()) /
       static_cast<double>(M))
          .matrix();
  MatrixXd dlogit_w = dlogit.array().rowwise() * weights.transpose().array();

  VectorXd g = VectorXd::Zero(param_count());
  int pos = 0;

  MatrixXd dh_last;  // gradient flowing into the trunk output
  MatrixXd gA;       // tasks x width, dlogit_w^T h2
  VectorXd dsum;     // column sums of dlogit_w
  if (kind_ == Kind::Multitask) {
    dh_last = dlogit_w * c.U;
    gA = dlogit_w.transpose() * c.h2;
    dsum = dlogit_w.colwise().sum().transpose();
  } else {
    dh_last = dlogit_w * out_w_.transpose();
  }

  // Backward through the trunk, writing gradients in pack() order as we go.
  MatrixXd dbn2, dpre2, dh1, dbn1, dpre1, dy0;
  if (kind_ == Kind::Multitask) {
    dbn2 = (dh_last.array() * (c.bn2_out.array() > 0.0).cast<double>()).matrix();
    bn_backward_data(bn2_, dbn2, c.xhat2, c.istd2, dpre2);
    dh1 = dpre2 * W2_;
  } else {
    dh1 = dh_last;
  }
  dbn1 = (dh1.array() * (c.bn1_out.array() > 0.0).cast<double>()).matrix();
  bn_backward_data(bn1_, dbn1, c.xhat1, c.istd1, dpre1);
  dy0 = dpre1 * W1_;

  // bn0
  VectorXd dg0 = (dy0.array() * c.xhat0.array()).colwise().sum().transpose();
  VectorXd db0 = dy0.colwise().sum().transpose();
  put(g, pos, dg0.data(), d_);
  put(g, pos, db0.data(), d_);
  // affine1
  MatrixXd dW1 = dpre1.transpose() * c.y0;
  VectorXd db1 = dpre1.colwise().sum().transpose();
  put_rows(g, pos, dW1);
  put(g, pos, db1.data(), width_);
  // bn1
  VectorXd dg1 = (dbn1.array() * c.xhat1.array()).colwise().sum().transpose();
  VectorXd dbeta1 = dbn1.colwise().sum().transpose();
  put(g, pos, dg1.data(), width_);
  put(g, pos, dbeta1.data(), width_);

  if (kind_ == Kind::Multitask) {
    MatrixXd dW2 = dpre2.transpose() * c.h1;
    VectorXd db2 = dpre2.colwise().sum().transpose();
    put_rows(g, pos, dW2);
    put(g, pos, db2.data(), width_);
    VectorXd dg2 = (dbn2.array() * c.xhat2.array()).colwise().sum().transpose();
    VectorXd dbeta2 = dbn2.colwise().sum().transpose();
    put(g, pos, dg2.data(), width_);
    put(g, pos, dbeta2.data(), width_);
    VectorXd rowbuf(width_);
    for (int t = 0; t < tasks_; ++t) {
      // d head: chi = (A m + c-part); dA row0 = m_t gA_t, row1 = gA_t.
      rowbuf = (task_m(t) * gA.row(t)).transpose();
      put(g, pos, rowbuf.data(), width_);
      rowbuf = gA.row(t).transpose();
      put(g, pos, rowbuf.data(), width_);
      double dc0 = task_m(t) * dsum(t);
      double dc1 = dsum(t);
      g(pos++) = dc0;
      g(pos++) = dc1;
    }
  } else {
    VectorXd dow = (c.h1.transpose() * dlogit_w).col(0);
    put(g, pos, dow.data(), width_);
    g(pos++) = dlogit_w.sum();
  }
  check_finite(g, "parameter gradient");
  out.grad = std::move(g);

  if (want_task_grad_norms) {
    // Per-task norm of d(w_i L_i)/dW at the last shared affine weights. Each
    // task re-runs only the tail of the backward pass.
    out.task_grad_norms.resize(tasks_);
    if (kind_ == Kind::Multitask) {
      for (int t = 0; t < tasks_; ++t) {
        MatrixXd dh2_t = dlogit_w.col(t) * c.U.row(t);
        MatrixXd dbn2_t = (dh2_t.array() * (c.bn2_out.array() > 0.0).cast<double>()).matrix();
        MatrixXd dpre2_t;
        bn_backward_data(bn2_, dbn2_t, c.xhat2, c.istd2, dpre2_t);
        out.task_grad_norms(t) = (dpre2_t.transpose() * c.h1).norm();
      }
    } else {
      MatrixXd dh1_t = dlogit_w * out_w_.transpose();
      MatrixXd dbn1_t = (dh1_t.array() * (c.bn1_out.array() > 0.0).cast<double>()).matrix();
      MatrixXd dpre1_t;
      bn_backward_data(bn1_, dbn1_t, c.xhat1, c.istd1, dpre1_t);
      out.task_grad_norms(0) = (dpre1_t.transpose() * c.y0).norm();
    }
  }
  return out;
}

double MultitaskNet::weighted_loss_no_update(const Eigen::Ref<const MatrixXd>& states,
                                             const Eigen::Ref<const VectorXd>& task_m,
                                             const Eigen::Ref<const MatrixXd>& psi_plus,
                                             const Eigen::Ref<const MatrixXd>& psi_minus,
                                             const Eigen::Ref<const VectorXd>& weights) const {
  Cache c;
  forward_core(states, task_m, true, true, c);
  VectorXd losses =
      -((psi_plus.array() * c.f.array() + psi_minus.array() * (1.0 - c.f.array()))
            .colwise()
            .mean())
           .matrix()
           .transpose();
  return losses.dot(weights);
}

double MultitaskNet::min_relu_input_magnitude(
    const Eigen::Ref<const MatrixXd>& states) const {
  Cache c;
  forward_core(states, VectorXd::Zero(tasks_), true, false, c);
  double m = c.bn1_out.array().abs().minCoeff();
  if (kind_ == Kind::Multitask) m = std::min(m, c.bn2_out.array().abs().minCoeff());
  return m;
}

Eigen::MatrixXd MultitaskNet::eval_trunk(const Eigen::Ref<const MatrixXd>& states) const {
  Cache c;
  forward_core(states, VectorXd::Zero(tasks_), false, false, c);
  return kind_ == Kind::Multitask ? c.h2 : c.h1;
}

void MultitaskNet::collapsed_head(int task, double m, Eigen::VectorXd& u, double& b) const {
  if (task < 0 || task >= tasks_) throw std::out_of_range("collapsed_head: bad task index");
  if (kind_ == Kind::Multitask) {
    u = (m * head_A_[task].row(0) + head_A_[task].row(1)).transpose();
    b = m * head_c_[task](0) + head_c_[task](1);
  } else {
    u = out_w_;
    b = out_b_;
  }
}

Eigen::MatrixXd MultitaskNet::eval_logits_from_trunk(
    const Eigen::Ref<const MatrixXd>& trunk,
    const Eigen::Ref<const VectorXd>& task_m) const {
  if (task_m.size() != tasks_)
    throw std::invalid_argument("eval_logits_from_trunk: task feature count mismatch");
  MatrixXd U(tasks_, width_);
  VectorXd bvec(tasks_);
  VectorXd u;
  double b;
  for (int t = 0; t < tasks_; ++t) {
    collapsed_head(t, task_m(t), u, b);
    U.row(t) = u.transpose();
    bvec(t) = b;
  }
  return (trunk * U.transpose()).rowwise() + bvec.transpose();
}

void MultitaskNet::transfer_shared_from(const MultitaskNet& src) {
  if (kind_ != Kind::Multitask || src.kind_ != Kind::Multitask)
    throw std::invalid_argument("transfer_shared_from: both nets must be multitask");
  if (src.d_ != d_ || src.width_ != width_)
    throw std::invalid_argument("transfer_shared_from: trunk shape mismatch");
  bn0_ = src.bn0_;
  W1_ = src.W1_;
  b1_ = src.b1_;
  bn1_ = src.bn1_;
  W2_ = src.W2_;
  b2_ = src.b2_;
  bn2_ = src.bn2_;
}

}  // namespace swing
