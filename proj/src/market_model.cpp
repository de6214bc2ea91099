#include "swing/market_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace swing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<std::string> FactorModel::validate() const {
  std::vector<std::string> bad;
  if (d < 1) bad.push_back("factor count d must be >= 1");
  if (alpha.size() != d) bad.push_back("alpha must have d entries");
  if (sigma.size() != d) bad.push_back("sigma must have d entries");
  if (rho.rows() != d || rho.cols() != d) bad.push_back("rho must be d x d");
  for (int i = 0; i < alpha.size(); ++i)
    if (!(alpha[i] > 0.0)) bad.push_back("alpha[" + std::to_string(i) + "] must be > 0");
  for (int i = 0; i < sigma.size(); ++i)
    if (!(sigma[i] >= 0.0)) bad.push_back("sigma[" + std::to_string(i) + "] must be >= 0");
  if (rho.rows() == d && rho.cols() == d && d >= 1) {
    if (!rho.isApprox(rho.transpose(), 1e-12)) bad.push_back("rho must be symmetric");
    for (int i = 0; i < d; ++i)
      if (std::abs(rho(i, i) - 1.0) > 1e-12)
        bad.push_back("rho diagonal must be 1 (entry " + std::to_string(i) + ")");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(rho, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() < -1e-12)
      bad.push_back("rho must be positive semidefinite");
  }
  if (time_grid.size() < 2) {
    bad.push_back("time grid needs at least two dates");
  } else {
    if (time_grid.front() < 0.0) bad.push_back("t_0 must be >= 0");
    for (std::size_t k = 0; k + 1 < time_grid.size(); ++k)
      if (!(time_grid[k + 1] > time_grid[k]))
        bad.push_back("time grid gap at k=" + std::to_string(k) + " must be > 0");
  }
  if (forward.size() != time_grid.size())
    bad.push_back("forward curve must have n+1 entries");
  for (std::size_t k = 0; k < forward.size(); ++k)
    if (!(forward[k] > 0.0))
      bad.push_back("forward[" + std::to_string(k) + "] must be > 0");
  return bad;
}

void FactorModel::ensure_valid() const {
  const auto bad = validate();
  if (bad.empty()) return;
  std::ostringstream os;
  os << "invalid factor model:";
  for (const auto& m : bad) os << "\n  - " << m;
  throw std::invalid_argument(os.str());
}

namespace {

// shared closed form: rho_ij (1 - e^{-(a_i+a_j) dt}) / (a_i + a_j)
MatrixXd ou_covariance(const FactorModel& m, double dt) {
  MatrixXd c(m.d, m.d);
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) {
      const double a = m.alpha[i] + m.alpha[j];
      c(i, j) = m.rho(i, j) * (1.0 - std::exp(-a * dt)) / a;
    }
  return c;
}

}  // namespace

MatrixXd FactorModel::marginal_covariance(int k) const {
  if (k < 0 || k > n()) throw std::out_of_range("marginal_covariance: bad date index");
  return ou_covariance(*this, time_grid[std::size_t(k)]);
}

void FactorModel::transition(int k, VectorXd& decay, MatrixXd& innovation_cov) const {
  if (k < 0 || k >= n()) throw std::out_of_range("transition: bad date index");
  const double dt = time_grid[std::size_t(k) + 1] - time_grid[std::size_t(k)];
  decay.resize(d);
  for (int i = 0; i < d; ++i) decay[i] = std::exp(-alpha[i] * dt);
  innovation_cov = ou_covariance(*this, dt);
}

double FactorModel::lambda_sq(int k) const {
  return sigma.dot(marginal_covariance(k) * sigma);
}

double FactorModel::spot_price(int k, const Eigen::Ref<const VectorXd>& s) const {
  return forward.at(std::size_t(k)) * std::exp(sigma.dot(s) - 0.5 * lambda_sq(k));
}

VectorXd FactorModel::spot_prices(int k,
                                  const Eigen::Ref<const MatrixXd>& states) const {
  const double f = forward.at(std::size_t(k));
  const double half_var = 0.5 * lambda_sq(k);
  return (f * ((states * sigma).array() - half_var).exp()).matrix();
}

MatrixXd psd_factor(const MatrixXd& m, const std::string& what) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // legal PSD input can fail a strict Cholesky; clip tiny negative eigenvalues
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::invalid_argument("factorization failed for " + what);
  VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, std::abs(ev.maxCoeff()));
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-12 * scale)
      throw std::invalid_argument(what + " is not positive semidefinite");
    ev[i] = std::max(ev[i], 0.0);
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

namespace {

// d normals for (path, date), consuming the cell's blocks in component order
void cell_normals(std::uint64_t seed, StreamPurpose purpose, std::int64_t path,
                  int date, int d, double* out) {
  CounterRng rng(seed, purpose, std::uint32_t(path), std::uint16_t(date));
  for (int i = 0; i < d; ++i) out[i] = rng.next_normal();
}

}  // namespace

PathBatch sample_paths(const FactorModel& model, std::uint64_t seed,
                       StreamPurpose purpose, int M, int k_start,
                       std::int64_t first_path_index) {
  model.ensure_valid();
  const int n = model.n();
  if (M < 1) throw std::invalid_argument("sample_paths: M must be >= 1");
  if (k_start < 0 || k_start > n)
    throw std::invalid_argument("sample_paths: bad k_start");

  PathBatch batch;
  batch.k_start = k_start;
  batch.values.assign(std::size_t(n - k_start) + 1, MatrixXd(M, model.d));

  const MatrixXd chol_marg =
      psd_factor(model.marginal_covariance(k_start),
                 "marginal covariance at date " + std::to_string(k_start));
  std::vector<VectorXd> decays(static_cast<std::size_t>(n));
  std::vector<MatrixXd> chol_innov(static_cast<std::size_t>(n));
  for (int k = k_start; k < n; ++k) {
    MatrixXd cov;
    model.transition(k, decays[std::size_t(k)], cov);
    chol_innov[std::size_t(k)] =
        psd_factor(cov, "innovation covariance at date " + std::to_string(k));
  }

  VectorXd z(model.d), s(model.d);
  for (int m = 0; m < M; ++m) {
    const std::int64_t path = first_path_index + m;
    cell_normals(seed, purpose, path, k_start, model.d, z.data());
    s = chol_marg * z;
    batch.values[0].row(m) = s.transpose();
    for (int k = k_start; k < n; ++k) {
      cell_normals(seed, purpose, path, k + 1, model.d, z.data());
      s = decays[std::size_t(k)].cwiseProduct(s) + chol_innov[std::size_t(k)] * z;
      batch.values[std::size_t(k - k_start) + 1].row(m) = s.transpose();
    }
  }
  return batch;
}

PathStream::PathStream(const FactorModel& model, std::uint64_t seed,
                       StreamPurpose purpose, int M, std::int64_t first_path_index)
    : model_(&model), seed_(seed), purpose_(purpose), first_path_(first_path_index) {
  model.ensure_valid();
  if (M < 1) throw std::invalid_argument("PathStream: M must be >= 1");
  const MatrixXd chol =
      psd_factor(model.marginal_covariance(0), "marginal covariance at date 0");
  cur_.resize(M, model.d);
  VectorXd z(model.d);
  for (int m = 0; m < M; ++m) {
    cell_normals(seed_, purpose_, first_path_ + m, 0, model.d, z.data());
    cur_.row(m) = (chol * z).transpose();
  }
}

void PathStream::advance() {
  if (k_ >= model_->n()) throw std::logic_error("PathStream: already at terminal date");
  VectorXd decay;
  MatrixXd cov;
  model_->transition(k_, decay, cov);
  const MatrixXd chol =
      psd_factor(cov, "innovation covariance at date " + std::to_string(k_));
  // per-path arithmetic identical to sample_paths so the two agree bitwise
  VectorXd z(model_->d), s(model_->d);
  for (int m = 0; m < cur_.rows(); ++m) {
    cell_normals(seed_, purpose_, first_path_ + m, k_ + 1, model_->d, z.data());
    s = cur_.row(m).transpose();
    s = decay.cwiseProduct(s) + chol * z;
    cur_.row(m) = s.transpose();
  }
  ++k_;
}

}  // namespace swing
