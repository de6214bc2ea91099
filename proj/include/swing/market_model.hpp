#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "swing/rng.hpp"

namespace swing {

// d-factor Gaussian forward-price model. Factor i accumulates
//   s_k^i = int_0^{t_k} e^{-alpha_i (t_k - u)} dW_u^i,
// with instantaneous correlation rho between drivers, and the spot is
//   S_k = F(0, t_k) * exp(<sigma, s_k> - lambda_k^2 / 2),
// so that E[S_k] = F(0, t_k) at every date.
struct FactorModel {
  int d = 1;
  Eigen::VectorXd alpha;          // mean reversion, 1/years, all > 0
  Eigen::VectorXd sigma;          // vol loadings, 1/sqrt(years), all >= 0
  Eigen::MatrixXd rho;            // d x d instantaneous correlation
  std::vector<double> forward;    // F(0, t_k), size n+1, all > 0
  std::vector<double> time_grid;  // t_0 <= ... <= t_n, years, gaps > 0

  int n() const { return int(time_grid.size()) - 1; }

  // Every violated invariant, one message each; empty means valid.
  std::vector<std::string> validate() const;
  void ensure_valid() const;  // throws std::invalid_argument listing violations

  // Cov(s_k): C_ij = rho_ij (1 - e^{-(a_i+a_j) t_k}) / (a_i + a_j)
  Eigen::MatrixXd marginal_covariance(int k) const;

  // Exact one-step law: s_{k+1} = decay .* s_k + eps, eps ~ N(0, innovation_cov),
  // decay_i = e^{-a_i dt}, innovation_cov the marginal form over dt = t_{k+1}-t_k.
  void transition(int k, Eigen::VectorXd& decay,
                  Eigen::MatrixXd& innovation_cov) const;

  // Var(<sigma, s_k>) = sigma' C(k) sigma
  double lambda_sq(int k) const;

  double spot_price(int k, const Eigen::Ref<const Eigen::VectorXd>& s) const;
  // batched: states M x d -> M spots
  Eigen::VectorXd spot_prices(int k,
                              const Eigen::Ref<const Eigen::MatrixXd>& states) const;
};

// Factor paths for dates k_start..n; values[k - k_start] is M x d.
struct PathBatch {
  int k_start = 0;
  std::vector<Eigen::MatrixXd> values;

  int paths() const { return values.empty() ? 0 : int(values.front().rows()); }
  int last_date() const { return k_start + int(values.size()) - 1; }
  const Eigen::MatrixXd& at(int k) const { return values.at(std::size_t(k - k_start)); }
};

// Cholesky factor with an eigenvalue-clipping fallback: near-singular
// correlation is legal input. `what` names the matrix in errors.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m, const std::string& what);

// Exact simulation from the marginal law at k_start (zero when t_{k_start}=0)
// through the terminal date. Path m draws from the (purpose, first_path_index+m,
// date) cells, so results are independent of M, blocking, and call order.
PathBatch sample_paths(const FactorModel& model, std::uint64_t seed,
                       StreamPurpose purpose, int M, int k_start,
                       std::int64_t first_path_index = 0);

// Streaming variant for forward valuation: holds only the current date's
// states. Visits the same cells as sample_paths with k_start = 0.
class PathStream {
 public:
  PathStream(const FactorModel& model, std::uint64_t seed, StreamPurpose purpose,
             int M, std::int64_t first_path_index = 0);

  int date() const { return k_; }
  const Eigen::MatrixXd& states() const { return cur_; }
  void advance();  // to date()+1; requires date() < n

 private:
  const FactorModel* model_;
  std::uint64_t seed_;
  StreamPurpose purpose_;
  std::int64_t first_path_;
  int k_ = 0;
  Eigen::MatrixXd cur_;
};

}  // namespace swing
