#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "swing/rng.hpp"
#include "swing/volume_grid.hpp"

namespace swing {

// Remaining-capacity feature fed to each task head, Z = (m(Q), 1). Firm
// contracts normalize against the global bounds; the penalty variant has no
// firm bounds, so it normalizes against total capacity n * q_max.
double task_feature_m(const VolumeConstraints& c, int Q);

// Batch normalization with learnable scale/shift. Train mode normalizes by
// biased batch statistics; running stats blend in the unbiased variance with
// momentum 0.1 and drive eval mode.
struct BatchNorm {
  Eigen::VectorXd gamma, beta, run_mean, run_var;
  double eps = 1e-5;
  double momentum = 0.1;

  void init(int dim);
};

struct AdamState {
  Eigen::VectorXd m, v;
  std::int64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void init(int dim);
};

// Standard Adam update with bias correction, in place.
void adam_step(Eigen::VectorXd& params, const Eigen::Ref<const Eigen::VectorXd>& grad,
               AdamState& state, double lr);

struct LossGrad {
  Eigen::VectorXd task_losses;      // I
  Eigen::VectorXd grad;             // d(sum_i w_i L_i)/d(theta), pack() layout
  Eigen::VectorXd task_grad_norms;  // ||d(w_i L_i)/dW_shared||_F; empty unless requested
};

// One decision network per exercise date. The multitask form shares a trunk
// (input BN, two affine+BN+ReLU blocks of `width` units) across I affine heads
// width -> 2; task i's decision is f_i = sigmoid(<chi_i, (m_i, 1)>). Date 0 has
// a single task on a deterministic-by-construction state, so it uses the
// degenerate scalar form: one hidden block and an affine width -> 1 output.
class MultitaskNet {
 public:
  enum class Kind { Multitask, Scalar };

  MultitaskNet(Kind kind, int input_dim, int task_count, int width = 50);

  Kind kind() const { return kind_; }
  int input_dim() const { return d_; }
  int task_count() const { return tasks_; }
  int width() const { return width_; }

  // He-uniform weights (bound sqrt(6/fan_in)), zero biases; the draw order is
  // part of the format: affine1 rows, affine2 rows, then head rows per task.
  void init_params(std::uint64_t seed, std::uint32_t date);

  // Flat layout: bn0 g/b, affine1 W/b, bn1 g/b, [affine2 W/b, bn2 g/b,] heads
  // (task-major, row-major) or the scalar output affine.
  int param_count() const;
  Eigen::VectorXd pack() const;
  void unpack(const Eigen::Ref<const Eigen::VectorXd>& p);
  Eigen::VectorXd pack_running_stats() const;
  void unpack_running_stats(const Eigen::Ref<const Eigen::VectorXd>& s);

  // f in (0,1), M x I. Train mode uses batch statistics and updates running
  // stats; eval mode reads running stats and has no side effects. Train mode
  // rejects batches of fewer than two rows.
  Eigen::MatrixXd forward_decisions(const Eigen::Ref<const Eigen::MatrixXd>& states,
                                    const Eigen::Ref<const Eigen::VectorXd>& task_m,
                                    bool train);

  // L_i = -mean_m[psi+ f_i + psi- (1 - f_i)], the flat gradient of
  // sum_i w_i L_i, and optionally ||grad of w_i L_i||_F at the last shared
  // affine weights. Runs in train mode (stats updated once per call).
  LossGrad loss_and_gradients(const Eigen::Ref<const Eigen::MatrixXd>& states,
                              const Eigen::Ref<const Eigen::VectorXd>& task_m,
                              const Eigen::Ref<const Eigen::MatrixXd>& psi_plus,
                              const Eigen::Ref<const Eigen::MatrixXd>& psi_minus,
                              const Eigen::Ref<const Eigen::VectorXd>& weights,
                              bool want_task_grad_norms);

  // Train-mode arithmetic with frozen running stats: the finite-difference
  // oracle needs a side-effect-free loss.
  double weighted_loss_no_update(const Eigen::Ref<const Eigen::MatrixXd>& states,
                                 const Eigen::Ref<const Eigen::VectorXd>& task_m,
                                 const Eigen::Ref<const Eigen::MatrixXd>& psi_plus,
                                 const Eigen::Ref<const Eigen::MatrixXd>& psi_minus,
                                 const Eigen::Ref<const Eigen::VectorXd>& weights) const;

  // Smallest |ReLU input| over the batch in train-mode arithmetic; tests use
  // it to keep finite differences away from the kinks.
  double min_relu_input_magnitude(const Eigen::Ref<const Eigen::MatrixXd>& states) const;

  // Eval-mode pieces for grouped bang-bang decisions: the trunk output is
  // level-independent, and each head collapses to one dot product,
  // logit = trunk . u + b.
  Eigen::MatrixXd eval_trunk(const Eigen::Ref<const Eigen::MatrixXd>& states) const;
  void collapsed_head(int task, double m, Eigen::VectorXd& u, double& b) const;
  Eigen::MatrixXd eval_logits_from_trunk(const Eigen::Ref<const Eigen::MatrixXd>& trunk,
                                         const Eigen::Ref<const Eigen::VectorXd>& task_m) const;

  // Copy trunk parameters and running stats from src; heads untouched.
  // Requires identical trunk shapes (both multitask, same input dim and width).
  void transfer_shared_from(const MultitaskNet& src);

 private:
  struct Cache;
  void forward_core(const Eigen::Ref<const Eigen::MatrixXd>& states,
                    const Eigen::Ref<const Eigen::VectorXd>& task_m, bool train,
                    bool with_heads, Cache& c) const;
  void commit_running_stats(const Cache& c, int M);

  Kind kind_;
  int d_, tasks_, width_;

  BatchNorm bn0_, bn1_, bn2_;
  Eigen::MatrixXd W1_;  // width x d
  Eigen::VectorXd b1_;
  Eigen::MatrixXd W2_;  // width x width (multitask only)
  Eigen::VectorXd b2_;
  std::vector<Eigen::Matrix<double, 2, Eigen::Dynamic>> head_A_;  // 2 x width
  std::vector<Eigen::Vector2d> head_c_;
  Eigen::VectorXd out_w_;  // scalar kind
  double out_b_ = 0.0;
};

}  // namespace swing
