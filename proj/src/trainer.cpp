#include "swing/trainer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "swing/valuation.hpp"

namespace swing {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::string> TrainConfig::validate() const {
  std::vector<std::string> v;
  if (iterations < 1) v.push_back("iterations must be >= 1");
  if (sweeps < 1) v.push_back("sweeps must be >= 1");
  if (batch_size < 2) v.push_back("batch_size must be >= 2 (batch statistics)");
  if (!(net_lr > 0)) v.push_back("net_lr must be > 0");
  if (!(weight_lr > 0)) v.push_back("weight_lr must be > 0");
  if (!(alpha >= 0)) v.push_back("alpha must be >= 0");
  if (!(beta >= 0 && beta <= 1)) v.push_back("beta must be in [0,1]");
  if (validation_paths < 2) v.push_back("validation_paths must be >= 2");
  if (width < 1) v.push_back("width must be >= 1");
  return v;
}

void TrainConfig::ensure_valid() const {
  auto v = validate();
  if (v.empty()) return;
  std::string msg = "invalid training config:";
  for (const auto& s : v) msg += "\n  - " + s;
  throw std::invalid_argument(msg);
}

Eigen::MatrixXd terminal_values(const ContractSpec& spec, const QGrid& grid,
                                const Eigen::Ref<const VectorXd>& spots_n) {
  const int n = grid.n();
  const int L = grid.levels(n);
  MatrixXd table(spots_n.size(), L);
  if (spec.kind == ContractKind::TakeOrPay) {
    table.setZero();
    return table;
  }
  for (int j = 0; j < L; ++j) {
    const double Q = grid.level_value(n, j);
    for (Eigen::Index m = 0; m < spots_n.size(); ++m)
      table(m, j) = spec.terminal_value(spots_n(m), Q);
  }
  return table;
}

Eigen::MatrixXd rollback_values(DecisionPolicy& policy, const ContractSpec& spec,
                                const QGrid& grid, int k,
                                const Eigen::Ref<const MatrixXd>& states_k,
                                const Eigen::Ref<const VectorXd>& spots_k,
                                const Eigen::Ref<const MatrixXd>& table_k1) {
  const Eigen::Index M = states_k.rows();
  const int L = grid.levels(k);
  if (table_k1.rows() != M || table_k1.cols() != grid.levels(k + 1))
    throw std::invalid_argument("rollback_values: table shape mismatch");
  const int base1 = grid.cumulative_bounds(k + 1).first;

  policy.begin_date(k, states_k, spots_k);
  BoolMatrix dec;
  bool have_dec = false;

  // reward c_k(S, q) = q (S - K) vectorized over paths
  ArrayXd edge = spots_k.array() - spec.strike;
  MatrixXd out(M, L);
  for (int j = 0; j < L; ++j) {
    const int Q = grid.level_value(k, j);
    const auto [qlo, qhi] = grid.admissible_controls(k, Q);
    ArrayXd lower = qlo * edge + table_k1.col(Q + qlo - base1).array();
    if (qlo == qhi) {
      out.col(j) = lower.matrix();
      continue;
    }
    if (!have_dec) {
      dec = policy.decide_all(k);
      have_dec = true;
    }
    ArrayXd upper = qhi * edge + table_k1.col(Q + qhi - base1).array();
    const int task = grid.task_index(k, Q);
    out.col(j) = dec.col(task).select(upper, lower).matrix();
  }
  return out;
}

Eigen::MatrixXd continuation_table(DecisionPolicy& policy, const FactorModel& model,
                                   const ContractSpec& spec, const QGrid& grid,
                                   const PathBatch& paths, int k) {
  const int n = grid.n();
  if (k < 0 || k >= n) throw std::out_of_range("continuation_table: date out of range");
  if (paths.k_start > k || paths.last_date() != n)
    throw std::invalid_argument("continuation_table: paths must span dates k..n");
  MatrixXd table = terminal_values(spec, grid, model.spot_prices(n, paths.at(n)));
  for (int l = n - 1; l > k; --l)
    table = rollback_values(policy, spec, grid, l, paths.at(l),
                            model.spot_prices(l, paths.at(l)), table);
  return table;
}

void branch_payoffs(const ContractSpec& spec, const QGrid& grid, int k,
                    const std::vector<int>& level_values,
                    const Eigen::Ref<const VectorXd>& spots_k,
                    const Eigen::Ref<const MatrixXd>& table_k1, MatrixXd& psi_plus,
                    MatrixXd& psi_minus) {
  const Eigen::Index M = spots_k.size();
  if (table_k1.rows() != M || table_k1.cols() != grid.levels(k + 1))
    throw std::invalid_argument("branch_payoffs: table shape mismatch");
  const int base1 = grid.cumulative_bounds(k + 1).first;
  const int I = static_cast<int>(level_values.size());
  psi_plus.resize(M, I);
  psi_minus.resize(M, I);
  ArrayXd edge = spots_k.array() - spec.strike;
  for (int j = 0; j < I; ++j) {
    const int Q = level_values[std::size_t(j)];
    const auto [qlo, qhi] = grid.admissible_controls(k, Q);
    psi_minus.col(j) = (qlo * edge + table_k1.col(Q + qlo - base1).array()).matrix();
    psi_plus.col(j) = (qhi * edge + table_k1.col(Q + qhi - base1).array()).matrix();
  }
}

namespace {

// Optimizer and weighting state for one date's net; the net itself lives in
// the policy (sweep mode) or a local (sequential) so rollbacks always see the
// freshest parameters without handoffs.
struct DateTrainer {
  AdamState adam;
  WeightState wstate;
  VectorXd mfeat;
  int date = 0;
};

MultitaskNet make_net(const FactorModel& model, const TrainConfig& cfg, int k, int task_count) {
  MultitaskNet net(k == 0 ? MultitaskNet::Kind::Scalar : MultitaskNet::Kind::Multitask, model.d,
                   task_count, cfg.width);
  net.init_params(cfg.seed, static_cast<std::uint32_t>(k));
  return net;
}

DateTrainer make_date_trainer(const NetPolicy& policy, const TrainConfig& cfg, int k,
                              int task_count, int param_count) {
  DateTrainer dt{AdamState{}, WeightState{}, policy.task_features(k), k};
  dt.adam.init(param_count);
  dt.wstate = init_weights(cfg.scheme, task_count, cfg.seed, static_cast<std::uint32_t>(k),
                           cfg.beta, cfg.alpha, cfg.weight_lr);
  return dt;
}

// One optimization step on a date's net given the continuation table at k+1.
TrainLogRow train_step(MultitaskNet& net, DateTrainer& dt, const ContractSpec& spec,
                       const QGrid& grid, const TrainConfig& cfg, int iteration,
                       const Eigen::Ref<const MatrixXd>& states_k,
                       const Eigen::Ref<const VectorXd>& spots_k,
                       const Eigen::Ref<const MatrixXd>& table_k1) {
  const bool smag = cfg.scheme == Scheme::SMAG;
  MatrixXd psi_plus, psi_minus;
  branch_payoffs(spec, grid, dt.date, grid.nontrivial_levels(dt.date), spots_k, table_k1,
                 psi_plus, psi_minus);

  LossGrad lg =
      net.loss_and_gradients(states_k, dt.mfeat, psi_plus, psi_minus, dt.wstate.w, smag);
  ema_update(dt.wstate, lg.task_losses);
  VectorXd l_tilde, r;
  if (smag) learning_speeds(dt.wstate, lg.task_losses, l_tilde, r);

  VectorXd params = net.pack();
  adam_step(params, lg.grad, dt.adam, cfg.net_lr);
  net.unpack(params);

  if (smag) smag_update(dt.wstate, lg.task_grad_norms, r, lg.task_grad_norms.mean());

  TrainLogRow row;
  row.iteration = iteration;
  row.date = dt.date;
  row.loss_mean = lg.task_losses.mean();
  row.loss_min = lg.task_losses.minCoeff();
  row.loss_max = lg.task_losses.maxCoeff();
  row.w_mean = dt.wstate.w.mean();
  row.w_min = dt.wstate.w.minCoeff();
  row.w_max = dt.wstate.w.maxCoeff();
  row.w_sum = dt.wstate.w.sum();
  row.global_loss = dt.wstate.w.dot(lg.task_losses);
  row.grad_norm_mean = smag ? lg.task_grad_norms.mean() : kNan;
  row.snapshot_price = kNan;
  row.snapshot_ci_low = kNan;
  row.snapshot_ci_high = kNan;
  return row;
}

void train_sequential(const FactorModel& model, const ContractSpec& spec, const QGrid& grid,
                      const TrainConfig& cfg, NetPolicy& policy,
                      std::vector<TrainLogRow>& log) {
  const int n = grid.n();
  for (int k = n - 1; k >= 0; --k) {
    const auto& levels = grid.nontrivial_levels(k);
    if (levels.empty()) continue;  // forced branches everywhere, nothing to learn

    MultitaskNet net = make_net(model, cfg, k, static_cast<int>(levels.size()));
    DateTrainer dt = make_date_trainer(policy, cfg, k, static_cast<int>(levels.size()),
                                       net.param_count());
    if (net.kind() == MultitaskNet::Kind::Multitask) {
      // Warm-start the trunk from the nearest later trained multitask net.
      for (int src = k + 1; src < n; ++src)
        if (policy.nets[src].has_value()) {
          net.transfer_shared_from(*policy.nets[src]);
          break;
        }
    }

    for (int iter = 0; iter < cfg.iterations; ++iter) {
      const std::int64_t first_path =
          (static_cast<std::int64_t>(k) * cfg.iterations + iter) * cfg.batch_size;
      PathBatch paths =
          sample_paths(model, cfg.seed, StreamPurpose::PathsTrain, cfg.batch_size, k, first_path);
      MatrixXd table = continuation_table(policy, model, spec, grid, paths, k);
      log.push_back(train_step(net, dt, spec, grid, cfg, iter, paths.at(k),
                               model.spot_prices(k, paths.at(k)), table));
    }
    policy.nets[k].emplace(std::move(net));
  }
}

void train_sweep(const FactorModel& model, const ContractSpec& spec, const QGrid& grid,
                 const TrainConfig& cfg, NetPolicy& policy, std::vector<TrainLogRow>& log) {
  const int n = grid.n();
  // The policy owns the nets so rollbacks always read current parameters;
  // trainers hold the per-date optimizer state, in backward date order.
  std::vector<DateTrainer> trainers;
  for (int k = n - 1; k >= 0; --k) {
    const auto& levels = grid.nontrivial_levels(k);
    if (levels.empty()) continue;
    policy.nets[k].emplace(make_net(model, cfg, k, static_cast<int>(levels.size())));
    trainers.push_back(make_date_trainer(policy, cfg, k, static_cast<int>(levels.size()),
                                         policy.nets[k]->param_count()));
  }
  PathBatch val_paths = sample_paths(model, cfg.seed, StreamPurpose::PathsValidation,
                                     cfg.validation_paths, 0, 0);

  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    PathBatch paths =
        sample_paths(model, cfg.seed, StreamPurpose::PathsTrain, cfg.batch_size, 0,
                     static_cast<std::int64_t>(sweep) * cfg.batch_size);
    MatrixXd table = terminal_values(spec, grid, model.spot_prices(n, paths.at(n)));
    std::size_t next_trainer = 0;
    for (int k = n - 1; k >= 0; --k) {
      const MatrixXd& states_k = paths.at(k);
      VectorXd spots_k = model.spot_prices(k, states_k);
      if (next_trainer < trainers.size() && trainers[next_trainer].date == k) {
        DateTrainer& dt = trainers[next_trainer];
        log.push_back(
            train_step(*policy.nets[k], dt, spec, grid, cfg, sweep, states_k, spots_k, table));
        ++next_trainer;
      }
      // Rollback sees this sweep's update at k before date k-1 trains.
      if (k > 0) table = rollback_values(policy, spec, grid, k, states_k, spots_k, table);
    }
    ValuationResult snap = evaluate_on_paths(policy, model, spec, grid, val_paths);
    TrainLogRow row;
    row.iteration = sweep;
    row.date = -1;
    row.loss_mean = row.loss_min = row.loss_max = kNan;
    row.w_mean = row.w_min = row.w_max = row.w_sum = kNan;
    row.global_loss = kNan;
    row.grad_norm_mean = kNan;
    row.snapshot_price = snap.price;
    row.snapshot_ci_low = snap.ci_low;
    row.snapshot_ci_high = snap.ci_high;
    log.push_back(row);
  }
}

}  // namespace

TrainResult train_policy(const FactorModel& model, const ContractSpec& spec,
                         const TrainConfig& cfg) {
  model.ensure_valid();
  spec.ensure_valid();
  cfg.ensure_valid();
  if (model.n() != spec.volume.n)
    throw std::invalid_argument("train_policy: time grid has " + std::to_string(model.n()) +
                                " decision dates but constraints expect " +
                                std::to_string(spec.volume.n));
  QGrid grid(spec.volume);
  TrainResult result{NetPolicy(grid, spec.volume), {}};
  if (cfg.mode == TrainMode::Sequential)
    train_sequential(model, spec, grid, cfg, result.policy, result.log);
  else
    train_sweep(model, spec, grid, cfg, result.policy, result.log);
  return result;
}

}  // namespace swing
