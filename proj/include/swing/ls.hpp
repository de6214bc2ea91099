#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swing/contracts.hpp"
#include "swing/market_model.hpp"
#include "swing/policy.hpp"

namespace swing {

// Regression basis over (factors, spot): monomials in s of total degree up to
// `degree` (constant always included) plus optionally the spot itself.
struct LSBasis {
  int degree = 2;  // 0, 1 or 2
  bool include_spot = true;

  int dimension(int d) const;
  std::vector<std::string> validate() const;
};

// Column j of the result is the j-th basis function evaluated on every row:
// constant, then s_i, then s_i s_j (i <= j), then the spot.
Eigen::MatrixXd ls_basis_matrix(const LSBasis& basis,
                                const Eigen::Ref<const Eigen::MatrixXd>& states,
                                const Eigen::Ref<const Eigen::VectorXd>& spots);

// Regression-based policy: per nontrivial (date, level), two fitted
// continuation estimates; take the upper branch iff
// c(q+) + fit+ >= c(q-) + fit-.
class LSPolicy : public DecisionPolicy {
 public:
  LSPolicy(QGrid grid, double strike, LSBasis basis);

  int dates() const override { return grid_.constraints().n; }
  const QGrid& grid() const { return grid_; }

  void begin_date(int k, const Eigen::Ref<const Eigen::MatrixXd>& states,
                  const Eigen::Ref<const Eigen::VectorXd>& spots) override;
  void decide_rows(int k, int task, int Q, const std::vector<int>& rows,
                   std::vector<char>& up) const override;
  BoolMatrix decide_all(int k) const override;

  // coefs[k][task] = (beta_lower, beta_upper) continuation regressions.
  std::vector<std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>> coefs;

 private:
  QGrid grid_;
  double strike_;
  LSBasis basis_;
  int current_date_ = -1;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi_;
  Eigen::VectorXd spots_;
};

struct LSFitResult {
  LSPolicy policy;
  std::vector<std::string> warnings;  // ill-conditioned dates where ridge applied
};

// Backward fit: at each date, regress each branch's realized continuation on
// the basis at the current state, then roll the value table back using the
// freshly fitted decisions with realized (not fitted) continuations.
LSFitResult fit_ls(const FactorModel& model, const ContractSpec& spec, std::int64_t N,
                   const LSBasis& basis, std::uint64_t seed);

}  // namespace swing
