#include "swing/weighting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swing/rng.hpp"

namespace swing {

using Eigen::VectorXd;

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::EW: return "EW";
    case Scheme::UW: return "UW";
    case Scheme::SMAG: return "SMAG";
  }
  throw std::logic_error("scheme_name: bad scheme");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "EW" || name == "ew") return Scheme::EW;
  if (name == "UW" || name == "uw") return Scheme::UW;
  if (name == "SMAG" || name == "smag") return Scheme::SMAG;
  throw std::invalid_argument("unknown weighting scheme: " + name);
}

WeightState init_weights(Scheme scheme, int task_count, std::uint64_t seed, std::uint32_t date,
                         double beta, double alpha, double weight_lr) {
  if (task_count < 1) throw std::invalid_argument("init_weights: need at least one task");
  WeightState st;
  st.scheme = scheme;
  st.beta = beta;
  st.alpha = alpha;
  st.weight_lr = weight_lr;
  st.w = VectorXd::Ones(task_count);
  if (scheme == Scheme::UW) {
    CounterRng rng(seed, StreamPurpose::UwInit, date, 0);
    for (int i = 0; i < task_count; ++i) st.w(i) = rng.next_uniform();
  }
  st.ema = VectorXd::Zero(task_count);
  st.prev_losses = VectorXd::Zero(task_count);
  st.t = 0;
  return st;
}

void ema_update(WeightState& state, const Eigen::Ref<const VectorXd>& losses) {
  if (losses.size() != state.w.size()) throw std::invalid_argument("ema_update: size mismatch");
  if (!losses.allFinite()) throw std::invalid_argument("ema_update: non-finite losses");
  if (state.t == 0)
    state.ema = losses;
  else
    state.ema = state.beta * state.ema + (1.0 - state.beta) * state.prev_losses;
  state.prev_losses = losses;
  state.t += 1;
}

void learning_speeds(const WeightState& state, const Eigen::Ref<const VectorXd>& losses,
                     VectorXd& l_tilde, VectorXd& r) {
  if (state.t == 0) throw std::logic_error("learning_speeds: EMA not initialized");
  const int n = static_cast<int>(losses.size());
  l_tilde.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = losses(i) - state.ema(i);
    double e = std::exp(-std::abs(z));
    l_tilde(i) = z >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
  }
  r = l_tilde * (static_cast<double>(n) / l_tilde.sum());
}

namespace {

// Renormalize to sum(w) = I subject to w >= floor: pin violators at the floor
// and rescale the free coordinates; repeat until feasible. Each round pins at
// least one coordinate, so this terminates.
void renormalize_with_floor(VectorXd& w, double floor) {
  const int n = static_cast<int>(w.size());
  const double total = static_cast<double>(n);
  std::vector<bool> pinned(n, false);
  int pinned_count = 0;
  for (int i = 0; i < n; ++i)
    if (w(i) <= floor) {
      w(i) = floor;
      pinned[i] = true;
      ++pinned_count;
    }
  while (true) {
    if (pinned_count == n) {
      w.setOnes();
      return;
    }
    double sum_free = 0.0;
    for (int i = 0; i < n; ++i)
      if (!pinned[i]) sum_free += w(i);
    if (!(sum_free > 0.0)) {
      w.setOnes();
      return;
    }
    double scale = (total - floor * pinned_count) / sum_free;
    bool newly_pinned = false;
    for (int i = 0; i < n; ++i) {
      if (pinned[i]) continue;
      if (w(i) * scale < floor) {
        w(i) = floor;
        pinned[i] = true;
        ++pinned_count;
        newly_pinned = true;
      }
    }
    if (newly_pinned) continue;
    for (int i = 0; i < n; ++i)
      if (!pinned[i]) w(i) *= scale;
    return;
  }
}

}  // namespace

void smag_update(WeightState& state, const Eigen::Ref<const VectorXd>& grad_norms,
                 const Eigen::Ref<const VectorXd>& r, double mean_grad) {
  if (state.scheme != Scheme::SMAG)
    throw std::logic_error("smag_update: scheme does not update weights");
  const int n = static_cast<int>(state.w.size());
  if (grad_norms.size() != n || r.size() != n)
    throw std::invalid_argument("smag_update: size mismatch");
  for (int i = 0; i < n; ++i) {
    double target = mean_grad * std::pow(r(i), state.alpha);
    double diff = grad_norms(i) - target;
    double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    double dgi_dwi = grad_norms(i) / std::max(state.w(i), state.w_floor);
    state.w(i) -= state.weight_lr * sgn * dgi_dwi;
  }
  renormalize_with_floor(state.w, state.w_floor);
}

}  // namespace swing
