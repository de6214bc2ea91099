#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace swing {

// Task-weighting schemes for the per-date multitask loss. EW fixes all
// weights at 1. UW draws them once from U(0,1) at initialization and never
// touches them again. SMAG tracks per-task learning speed through an EMA of
// losses and takes signed gradient steps that pull per-task gradient norms
// toward a common, speed-adjusted target.
enum class Scheme { EW, UW, SMAG };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct WeightState {
  Scheme scheme = Scheme::SMAG;
  Eigen::VectorXd w;            // task weights, SMAG keeps sum(w) = I
  Eigen::VectorXd ema;          // L-bar, EMA of past losses
  Eigen::VectorXd prev_losses;  // the EMA at t uses the loss from t-1
  double beta = 0.7;            // EMA decay
  double alpha = 1.8;           // balancing strength
  double weight_lr = 0.01;
  double w_floor = 1e-3;
  std::int64_t t = 0;  // iterations observed by ema_update
};

// SMAG/EW start at w = 1; UW draws w ~ U(0,1) i.i.d. from the date's
// dedicated stream so reruns reproduce the same weights.
WeightState init_weights(Scheme scheme, int task_count, std::uint64_t seed, std::uint32_t date,
                         double beta = 0.7, double alpha = 1.8, double weight_lr = 0.01);

// L-bar(0) = L(0); L-bar(t) = beta L-bar(t-1) + (1-beta) L(t-1). Call once per
// iteration with that iteration's losses; the update itself consumes the
// previous iteration's losses, as written.
void ema_update(WeightState& state, const Eigen::Ref<const Eigen::VectorXd>& losses);

// L-tilde_i = sigmoid(L_i - Lbar_i) in (0,1); r_i = L-tilde_i / mean(L-tilde),
// so mean(r) = 1. Sigmoid keeps the ratio well-defined for zero or negative
// losses.
void learning_speeds(const WeightState& state, const Eigen::Ref<const Eigen::VectorXd>& losses,
                     Eigen::VectorXd& l_tilde, Eigen::VectorXd& r);

// One signed descent step on sum_i |G_i - Gbar r_i^alpha| with the target held
// constant and dG_i/dw_i = G_i / max(w_i, floor), then renormalization that
// keeps both sum(w) = I and w >= floor (floored coordinates are pinned and the
// rest rescaled until feasible; all-pinned falls back to uniform weights).
void smag_update(WeightState& state, const Eigen::Ref<const Eigen::VectorXd>& grad_norms,
                 const Eigen::Ref<const Eigen::VectorXd>& r, double mean_grad);

}  // namespace swing
