#include "swing/ls.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "swing/trainer.hpp"

namespace swing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int LSBasis::dimension(int d) const {
  int b = 1;
  if (degree >= 1) b += d;
  if (degree >= 2) b += d * (d + 1) / 2;
  if (include_spot) b += 1;
  return b;
}

std::vector<std::string> LSBasis::validate() const {
  std::vector<std::string> v;
  if (degree < 0 || degree > 2) v.push_back("basis degree must be 0, 1 or 2");
  return v;
}

Eigen::MatrixXd ls_basis_matrix(const LSBasis& basis, const Eigen::Ref<const MatrixXd>& states,
                                const Eigen::Ref<const VectorXd>& spots) {
  const Eigen::Index M = states.rows();
  const int d = static_cast<int>(states.cols());
  MatrixXd phi(M, basis.dimension(d));
  Eigen::Index col = 0;
  phi.col(col++).setOnes();
  if (basis.degree >= 1)
    for (int i = 0; i < d; ++i) phi.col(col++) = states.col(i);
  if (basis.degree >= 2)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        phi.col(col++) = states.col(i).cwiseProduct(states.col(j));
  if (basis.include_spot) phi.col(col++) = spots;
  return phi;
}

LSPolicy::LSPolicy(QGrid grid, double strike, LSBasis basis)
    : grid_(std::move(grid)), strike_(strike), basis_(basis) {
  coefs.resize(static_cast<std::size_t>(grid_.constraints().n));
  for (int k = 0; k < grid_.constraints().n; ++k)
    coefs[std::size_t(k)].resize(grid_.nontrivial_levels(k).size());
}

void LSPolicy::begin_date(int k, const Eigen::Ref<const MatrixXd>& states,
                          const Eigen::Ref<const VectorXd>& spots) {
  if (k < 0 || k >= dates()) throw std::out_of_range("begin_date: date out of range");
  current_date_ = k;
  phi_ = ls_basis_matrix(basis_, states, spots);
  spots_ = spots;
}

void LSPolicy::decide_rows(int k, int task, int Q, const std::vector<int>& rows,
                           std::vector<char>& up) const {
  if (k != current_date_) throw std::logic_error("decide_rows: begin_date(k) not called");
  const auto& pair = coefs.at(std::size_t(k)).at(std::size_t(task));
  if (pair.first.size() == 0)
    throw std::logic_error("decide_rows: unfitted regression at date " + std::to_string(k));
  const auto [qlo, qhi] = grid_.admissible_controls(k, Q);
  VectorXd diff = pair.second - pair.first;  // upper minus lower continuation fit
  up.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int m = rows[i];
    double gap = (qhi - qlo) * (spots_(m) - strike_) + phi_.row(m).dot(diff);
    up[i] = gap >= 0.0 ? 1 : 0;
  }
}

BoolMatrix LSPolicy::decide_all(int k) const {
  if (k != current_date_) throw std::logic_error("decide_all: begin_date(k) not called");
  const auto& levels = grid_.nontrivial_levels(k);
  BoolMatrix out(phi_.rows(), static_cast<Eigen::Index>(levels.size()));
  for (std::size_t t = 0; t < levels.size(); ++t) {
    const auto& pair = coefs.at(std::size_t(k)).at(t);
    if (pair.first.size() == 0)
      throw std::logic_error("decide_all: unfitted regression at date " + std::to_string(k));
    const auto [qlo, qhi] = grid_.admissible_controls(k, levels[t]);
    VectorXd gap = phi_ * (pair.second - pair.first);
    gap.array() += (qhi - qlo) * (spots_.array() - strike_);
    out.col(static_cast<Eigen::Index>(t)) = gap.array() >= 0.0;
  }
  return out;
}

LSFitResult fit_ls(const FactorModel& model, const ContractSpec& spec, std::int64_t N,
                   const LSBasis& basis, std::uint64_t seed) {
  model.ensure_valid();
  spec.ensure_valid();
  {
    auto v = basis.validate();
    if (!v.empty()) throw std::invalid_argument("invalid basis: " + v.front());
  }
  if (model.n() != spec.volume.n)
    throw std::invalid_argument("fit_ls: time grid / constraints date count mismatch");
  const int B = basis.dimension(model.d);
  if (N < 10 * static_cast<std::int64_t>(B))
    throw std::invalid_argument("fit_ls: need at least 10 paths per basis function");

  QGrid grid(spec.volume);
  const int n = grid.n();
  LSFitResult result{LSPolicy(grid, spec.strike, basis), {}};
  LSPolicy& policy = result.policy;

  PathBatch paths =
      sample_paths(model, seed, StreamPurpose::LsPaths, static_cast<int>(N), 0, 0);
  MatrixXd table = terminal_values(spec, grid, model.spot_prices(n, paths.at(n)));

  for (int k = n - 1; k >= 0; --k) {
    const MatrixXd& states = paths.at(k);
    VectorXd spots = model.spot_prices(k, states);
    const auto& levels = grid.nontrivial_levels(k);
    if (!levels.empty()) {
      MatrixXd phi = ls_basis_matrix(basis, states, spots);
      MatrixXd gram = phi.transpose() * phi / static_cast<double>(N);
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
      const double emax = eig.eigenvalues().maxCoeff();
      const double emin = eig.eigenvalues().minCoeff();
      if (!(emin > 0.0) || emax / emin > 1e10) {
        gram.diagonal().array() += 1e-8;
        result.warnings.push_back("date " + std::to_string(k) +
                                  ": ill-conditioned basis Gram, ridge 1e-8 applied");
      }
      Eigen::LDLT<MatrixXd> solver(gram);
      const int base1 = grid.cumulative_bounds(k + 1).first;
      for (std::size_t t = 0; t < levels.size(); ++t) {
        const int Q = levels[t];
        const auto [qlo, qhi] = grid.admissible_controls(k, Q);
        VectorXd rhs_lo = phi.transpose() * table.col(Q + qlo - base1) / static_cast<double>(N);
        VectorXd rhs_hi = phi.transpose() * table.col(Q + qhi - base1) / static_cast<double>(N);
        policy.coefs[std::size_t(k)][t] = {solver.solve(rhs_lo), solver.solve(rhs_hi)};
      }
    }
    // Realized continuations under the just-fitted rule, not fitted values.
    table = rollback_values(policy, spec, grid, k, states, spots, table);
  }
  return result;
}

}  // namespace swing
