#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "swing/contracts.hpp"
#include "swing/market_model.hpp"
#include "swing/policy.hpp"
#include "swing/weighting.hpp"

namespace swing {

enum class TrainMode { Sequential, Sweep };

struct TrainConfig {
  int iterations = 200;   // per date, sequential mode
  int sweeps = 200;       // outer loop, sweep mode
  int batch_size = 2048;  // fresh simulated paths per iteration
  double net_lr = 0.1;
  double weight_lr = 0.01;
  Scheme scheme = Scheme::SMAG;
  double alpha = 1.8;
  double beta = 0.7;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::Sequential;
  int validation_paths = 10000;  // sweep-mode snapshot pricing
  int width = 50;

  std::vector<std::string> validate() const;
  void ensure_valid() const;
};

// One row per optimization step; sweep mode appends one snapshot row per
// sweep (date = -1) carrying the validation-set price and its CI.
struct TrainLogRow {
  int iteration = 0;
  int date = 0;
  double loss_mean = 0, loss_min = 0, loss_max = 0;
  double w_mean = 0, w_min = 0, w_max = 0, w_sum = 0;
  double global_loss = 0;
  double grad_norm_mean = 0;  // NaN when per-task norms were not computed
  double snapshot_price = 0, snapshot_ci_low = 0, snapshot_ci_high = 0;  // NaN off snapshots
};

struct TrainResult {
  NetPolicy policy;
  std::vector<TrainLogRow> log;
};

// Terminal slice of the value table: column j holds g_n(S_n, Q_j) for the
// j-th attainable terminal level. Identically zero for firm contracts.
Eigen::MatrixXd terminal_values(const ContractSpec& spec, const QGrid& grid,
                                const Eigen::Ref<const Eigen::VectorXd>& spots_n);

// One backward step of the pathwise value recursion: from the table over date
// k+1's levels to the table over date k's levels, applying `policy` at date k
// (forced branch on trivial levels). begin_date(k) is called internally.
Eigen::MatrixXd rollback_values(DecisionPolicy& policy, const ContractSpec& spec,
                                const QGrid& grid, int k,
                                const Eigen::Ref<const Eigen::MatrixXd>& states_k,
                                const Eigen::Ref<const Eigen::VectorXd>& spots_k,
                                const Eigen::Ref<const Eigen::MatrixXd>& table_k1);

// Pathwise continuation values v_{k+1}(s_{k+1}, Q) for every attainable level
// Q at date k+1, obtained by rolling the frozen policy back from the terminal
// date. paths must start at or before k and reach the terminal date.
Eigen::MatrixXd continuation_table(DecisionPolicy& policy, const FactorModel& model,
                                   const ContractSpec& spec, const QGrid& grid,
                                   const PathBatch& paths, int k);

// Branch payoffs psi+- for the listed cumulative levels at date k:
// psi_{m,j} = c_k(S_k^m, q^+-) + table_k1(m, Q_j + q^+-). Trivial levels give
// psi+ = psi-.
void branch_payoffs(const ContractSpec& spec, const QGrid& grid, int k,
                    const std::vector<int>& level_values,
                    const Eigen::Ref<const Eigen::VectorXd>& spots_k,
                    const Eigen::Ref<const Eigen::MatrixXd>& table_k1,
                    Eigen::MatrixXd& psi_plus, Eigen::MatrixXd& psi_minus);

// Backward training of the full per-date policy. Sequential mode trains
// dates n-1 down to 0 to convergence each, seeding each trunk from the next
// date's trained trunk; sweep mode interleaves one step per date per sweep
// and snapshots a fixed validation set's price after each sweep.
TrainResult train_policy(const FactorModel& model, const ContractSpec& spec,
                         const TrainConfig& cfg);

}  // namespace swing
