#include "swing/valuation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace swing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Compensated summation; path values are added in path-index order so the
// reported price does not depend on block sizes.
struct Kahan {
  double sum = 0, c = 0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// One forward pass over M paths whose date-k states are served by states_at
// (monotone k from 0 to n). Returns total pathwise value; tracks terminal
// volumes.
VectorXd forward_values(DecisionPolicy& policy, const FactorModel& model,
                        const ContractSpec& spec, const QGrid& grid,
                        const std::function<const MatrixXd&(int)>& states_at, int M, int& q_min,
                        int& q_max) {
  const int n = grid.n();
  std::vector<int> Q(static_cast<std::size_t>(M), 0);
  VectorXd value = VectorXd::Zero(M);
  std::vector<std::vector<int>> buckets;
  std::vector<char> up;

  for (int k = 0; k < n; ++k) {
    const MatrixXd& states = states_at(k);
    VectorXd spots = model.spot_prices(k, states);
    policy.begin_date(k, states, spots);
    const auto [qd, qu] = grid.cumulative_bounds(k);
    buckets.assign(static_cast<std::size_t>(qu - qd + 1), {});
    for (int m = 0; m < M; ++m) {
      if (Q[std::size_t(m)] < qd || Q[std::size_t(m)] > qu)
        throw std::logic_error("valuation: unattainable cumulative volume reached");
      buckets[std::size_t(Q[std::size_t(m)] - qd)].push_back(m);
    }
    for (int j = 0; j <= qu - qd; ++j) {
      const auto& rows = buckets[std::size_t(j)];
      if (rows.empty()) continue;
      const int Qv = qd + j;
      const auto [qlo, qhi] = grid.admissible_controls(k, Qv);
      if (qlo == qhi) {
        for (int m : rows) {
          value(m) += spec.immediate_reward(spots(m), qlo);
          Q[std::size_t(m)] += qlo;
        }
        continue;
      }
      policy.decide_rows(k, grid.task_index(k, Qv), Qv, rows, up);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const int m = rows[i];
        const int q = up[i] ? qhi : qlo;
        value(m) += spec.immediate_reward(spots(m), q);
        Q[std::size_t(m)] += q;
      }
    }
  }

  VectorXd spots_n = model.spot_prices(n, states_at(n));
  for (int m = 0; m < M; ++m) {
    value(m) += spec.terminal_value(spots_n(m), Q[std::size_t(m)]);
    q_min = std::min(q_min, Q[std::size_t(m)]);
    q_max = std::max(q_max, Q[std::size_t(m)]);
  }
  return value;
}

ValuationResult finish(const Kahan& sum, const Kahan& sumsq, std::int64_t M, std::uint64_t seed,
                       int q_min, int q_max, double wall) {
  ValuationResult r;
  r.paths = M;
  r.seed = seed;
  r.price = sum.sum / static_cast<double>(M);
  double var = sumsq.sum / static_cast<double>(M) - r.price * r.price;
  var = std::max(var, 0.0) * static_cast<double>(M) / std::max<double>(1.0, double(M - 1));
  r.std_error = std::sqrt(var / static_cast<double>(M));
  r.ci_low = r.price - 1.96 * r.std_error;
  r.ci_high = r.price + 1.96 * r.std_error;
  r.terminal_volume_min = q_min;
  r.terminal_volume_max = q_max;
  r.wall_seconds = wall;
  return r;
}

}  // namespace

ValuationResult evaluate_policy(DecisionPolicy& policy, const FactorModel& model,
                                const ContractSpec& spec, const QGrid& grid, std::int64_t M,
                                std::uint64_t seed) {
  if (M < 2) throw std::invalid_argument("evaluate_policy: need at least 2 paths");
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::int64_t kBlock = 65536;
  Kahan sum, sumsq;
  int q_min = std::numeric_limits<int>::max();
  int q_max = std::numeric_limits<int>::min();
  for (std::int64_t start = 0; start < M; start += kBlock) {
    const int B = static_cast<int>(std::min(kBlock, M - start));
    PathStream stream(model, seed, StreamPurpose::PathsValuation, B, start);
    auto states_at = [&stream](int k) -> const MatrixXd& {
      while (stream.date() < k) stream.advance();
      return stream.states();
    };
    VectorXd vals = forward_values(policy, model, spec, grid, states_at, B, q_min, q_max);
    for (int m = 0; m < B; ++m) {
      sum.add(vals(m));
      sumsq.add(vals(m) * vals(m));
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish(sum, sumsq, M, seed, q_min, q_max, wall);
}

ValuationResult evaluate_on_paths(DecisionPolicy& policy, const FactorModel& model,
                                  const ContractSpec& spec, const QGrid& grid,
                                  const PathBatch& paths) {
  if (paths.k_start != 0 || paths.last_date() != grid.n())
    throw std::invalid_argument("evaluate_on_paths: paths must span dates 0..n");
  const int M = paths.paths();
  if (M < 2) throw std::invalid_argument("evaluate_on_paths: need at least 2 paths");
  const auto t0 = std::chrono::steady_clock::now();
  Kahan sum, sumsq;
  int q_min = std::numeric_limits<int>::max();
  int q_max = std::numeric_limits<int>::min();
  auto states_at = [&paths](int k) -> const MatrixXd& { return paths.at(k); };
  VectorXd vals = forward_values(policy, model, spec, grid, states_at, M, q_min, q_max);
  for (int m = 0; m < M; ++m) {
    sum.add(vals(m));
    sumsq.add(vals(m) * vals(m));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish(sum, sumsq, M, 0, q_min, q_max, wall);
}

}  // namespace swing
