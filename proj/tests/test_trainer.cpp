#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "swing/trainer.hpp"
#include "swing/valuation.hpp"

using namespace swing;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

FactorModel flat_model(int n, double sigma = 0.7, std::vector<double> fwd = {}) {
  FactorModel m;
  m.d = 1;
  m.alpha = VectorXd::Constant(1, 4.0);
  m.sigma = VectorXd::Constant(1, sigma);
  m.rho = MatrixXd::Identity(1, 1);
  if (fwd.empty())
    m.forward.assign(std::size_t(n) + 1, 20.0);
  else
    m.forward = std::move(fwd);
  m.time_grid.resize(std::size_t(n) + 1);
  for (int k = 0; k <= n; ++k) m.time_grid[std::size_t(k)] = double(k) / n;
  return m;
}

ContractSpec small_top(int n, int Q_min, int Q_max, double strike = 20.0) {
  ContractSpec s;
  s.kind = ContractKind::TakeOrPay;
  s.strike = strike;
  s.volume = {0, 1, Q_min, Q_max, n, true};
  return s;
}

// Decides the same branch everywhere; independent of states.
struct ConstPolicy : DecisionPolicy {
  const QGrid* grid;
  bool up_all;
  int M = 0;

  ConstPolicy(const QGrid& g, bool up) : grid(&g), up_all(up) {}
  int dates() const override { return grid->n(); }
  void begin_date(int, const Eigen::Ref<const Eigen::MatrixXd>& states,
                  const Eigen::Ref<const Eigen::VectorXd>&) override {
    M = int(states.rows());
  }
  void decide_rows(int, int, int, const std::vector<int>& rows,
                   std::vector<char>& up) const override {
    up.assign(rows.size(), up_all ? 1 : 0);
  }
  BoolMatrix decide_all(int k) const override {
    return BoolMatrix::Constant(M, int(grid->nontrivial_levels(k).size()), up_all);
  }
};

// Deterministic DP over the level grid for constant spots; `pick` chooses the
// control among the admissible ones: -1 lower branch, +1 upper, 0 optimal.
double dp_value(const ContractSpec& spec, const QGrid& g, const std::vector<double>& spots,
                int pick) {
  const int n = g.n();
  auto [tlo, thi] = g.cumulative_bounds(n);
  std::vector<double> v(std::size_t(thi - tlo) + 1);
  for (int Q = tlo; Q <= thi; ++Q)
    v[std::size_t(Q - tlo)] = spec.terminal_value(spots[std::size_t(n)], Q);
  for (int k = n - 1; k >= 0; --k) {
    auto [lo, hi] = g.cumulative_bounds(k);
    auto [nlo, nhi] = g.cumulative_bounds(k + 1);
    (void)nhi;
    std::vector<double> nv(std::size_t(hi - lo) + 1);
    for (int Q = lo; Q <= hi; ++Q) {
      auto [qm, qp] = g.admissible_controls(k, Q);
      const int q_lo = (pick == +1) ? qp : qm;
      const int q_hi = (pick == -1) ? qm : qp;
      double best = -1e300;
      for (int q = q_lo; q <= q_hi; ++q)
        best = std::max(best, spec.immediate_reward(spots[std::size_t(k)], q) +
                                  v[std::size_t(Q + q - nlo)]);
      nv[std::size_t(Q - lo)] = best;
    }
    v = std::move(nv);
  }
  return v[0];
}

}  // namespace

TEST_CASE("terminal values: zero for firm, penalty formula otherwise") {
  ContractSpec top = small_top(6, 2, 4);
  QGrid g(top.volume);
  VectorXd spots = VectorXd::LinSpaced(5, 15.0, 25.0);
  MatrixXd tv = terminal_values(top, g, spots);
  CHECK(tv.rows() == 5);
  CHECK(tv.cols() == g.levels(6));
  CHECK(tv.cwiseAbs().maxCoeff() == 0.0);

  ContractSpec pen;
  pen.kind = ContractKind::Penalty;
  pen.strike = 20.0;
  pen.A = 1.0;
  pen.B = 1.0;
  pen.Q_A = 3;
  pen.Q_B = 5;
  pen.volume = {0, 1, 0, 0, 6, false};
  QGrid gp(pen.volume);
  MatrixXd tvp = terminal_values(pen, gp, spots);
  for (int m = 0; m < 5; ++m)
    for (int j = 0; j < gp.levels(6); ++j)
      CHECK(tvp(m, j) == doctest::Approx(pen.terminal_value(spots(m), gp.level_value(6, j)))
                             .epsilon(1e-14));
}

TEST_CASE("branch payoffs: reward plus shifted table, trivial levels matched") {
  ContractSpec spec = small_top(5, 2, 4, 19.0);
  QGrid g(spec.volume);
  const int k = 3, M = 4;
  VectorXd spots = VectorXd::LinSpaced(M, 18.0, 24.0);
  MatrixXd table_k1(M, g.levels(k + 1));
  for (int m = 0; m < M; ++m)
    for (int j = 0; j < table_k1.cols(); ++j) table_k1(m, j) = 10.0 * m + j;

  auto [lo, hi] = g.cumulative_bounds(k);
  std::vector<int> levels;
  for (int Q = lo; Q <= hi; ++Q) levels.push_back(Q);
  MatrixXd psi_p, psi_m;
  branch_payoffs(spec, g, k, levels, spots, table_k1, psi_p, psi_m);
  REQUIRE(psi_p.rows() == M);
  REQUIRE(psi_p.cols() == int(levels.size()));

  const auto [nlo, nhi] = g.cumulative_bounds(k + 1);
  (void)nhi;
  for (int m = 0; m < M; ++m)
    for (std::size_t j = 0; j < levels.size(); ++j) {
      auto [qm, qp] = g.admissible_controls(k, levels[j]);
      const double want_p =
          spec.immediate_reward(spots(m), qp) + table_k1(m, levels[j] + qp - nlo);
      const double want_m =
          spec.immediate_reward(spots(m), qm) + table_k1(m, levels[j] + qm - nlo);
      CHECK(psi_p(m, int(j)) == doctest::Approx(want_p).epsilon(1e-14));
      CHECK(psi_m(m, int(j)) == doctest::Approx(want_m).epsilon(1e-14));
      if (qm == qp) CHECK(psi_p(m, int(j)) == psi_m(m, int(j)));
    }
}

TEST_CASE("rollback matches a hand recursion under fixed policies") {
  // sigma = 0 makes every path identical, so the pathwise rollback must equal
  // the deterministic DP that follows the same branch choices.
  std::vector<double> fwd = {18.0, 22.0, 19.0, 21.0, 18.5, 20.5};
  FactorModel model = flat_model(5, 0.0, fwd);
  ContractSpec spec = small_top(5, 2, 4);
  QGrid g(spec.volume);
  PathBatch paths = sample_paths(model, 1, StreamPurpose::PathsTrain, 3, 0);

  for (bool up : {false, true}) {
    ConstPolicy pol(g, up);
    MatrixXd table = terminal_values(spec, g, model.spot_prices(5, paths.at(5)));
    for (int k = 4; k >= 0; --k)
      table = rollback_values(pol, spec, g, k, paths.at(k),
                              model.spot_prices(k, paths.at(k)), table);
    REQUIRE(table.cols() == 1);  // date 0 has the single level Q = 0
    const double oracle = dp_value(spec, g, fwd, up ? +1 : -1);
    CHECK(table(0, 0) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(table(2, 0) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("continuation table is the rollback from the terminal date") {
  std::vector<double> fwd = {18.0, 22.0, 19.0, 21.0, 18.5, 20.5};
  FactorModel model = flat_model(5, 0.0, fwd);
  ContractSpec spec = small_top(5, 2, 4);
  QGrid g(spec.volume);
  PathBatch paths = sample_paths(model, 2, StreamPurpose::PathsTrain, 2, 0);
  ConstPolicy pol(g, false);

  // at k = n-1 the continuation is the terminal slice itself (zero for ToP)
  MatrixXd last = continuation_table(pol, model, spec, g, paths, 4);
  CHECK(last.cwiseAbs().maxCoeff() == 0.0);

  // one step earlier: column j must hold reward + continuation of the lower
  // branch at date 4 under constant spots
  MatrixXd t3 = continuation_table(pol, model, spec, g, paths, 3);
  auto [lo4, hi4] = g.cumulative_bounds(4);
  for (int j = 0; j < t3.cols(); ++j) {
    const int Q = lo4 + j;
    auto [qm, qp] = g.admissible_controls(4, Q);
    (void)qp;
    const double want = spec.immediate_reward(fwd[4], qm);
    CHECK(t3(0, j) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("training recovers the deterministic optimum when vol is zero") {
  std::vector<double> fwd = {18.0, 22.0, 19.0, 21.0, 18.5, 20.5};
  FactorModel model = flat_model(5, 0.0, fwd);
  ContractSpec spec = small_top(5, 2, 4);
  QGrid g(spec.volume);
  const double best = dp_value(spec, g, fwd, 0);
  CHECK(best == doctest::Approx(3.0));  // buy the +2 and +1 spreads

  for (TrainMode mode : {TrainMode::Sequential, TrainMode::Sweep}) {
    TrainConfig cfg;
    cfg.mode = mode;
    cfg.iterations = 80;
    cfg.sweeps = 120;
    cfg.batch_size = 32;
    cfg.validation_paths = 16;
    cfg.seed = 5;
    TrainResult res = train_policy(model, spec, cfg);
    ValuationResult v = evaluate_policy(res.policy, model, spec, g, 64, 9);
    CAPTURE(int(mode));
    CHECK(v.price == doctest::Approx(best).epsilon(1e-10));
    CHECK(v.std_error == doctest::Approx(0.0));
    CHECK(v.terminal_volume_min >= 2);
    CHECK(v.terminal_volume_max <= 4);
  }
}

TEST_CASE("head counts equal the nontrivial level counts, date 0 is scalar") {
  FactorModel model = flat_model(6, 0.7);
  ContractSpec spec = small_top(6, 3, 5);
  QGrid g(spec.volume);
  TrainConfig cfg;
  cfg.iterations = 2;
  cfg.batch_size = 8;
  cfg.seed = 1;
  TrainResult res = train_policy(model, spec, cfg);
  REQUIRE(int(res.policy.nets.size()) == 6);
  for (int k = 0; k < 6; ++k) {
    const auto& lv = g.nontrivial_levels(k);
    if (lv.empty()) {
      CHECK(!res.policy.nets[std::size_t(k)].has_value());
    } else {
      REQUIRE(res.policy.nets[std::size_t(k)].has_value());
      CHECK(res.policy.nets[std::size_t(k)]->task_count() == int(lv.size()));
      const auto kind = res.policy.nets[std::size_t(k)]->kind();
      CHECK((kind == MultitaskNet::Kind::Scalar) == (k == 0));
    }
  }
}

TEST_CASE("training is reproducible and seed-sensitive") {
  FactorModel model = flat_model(4, 0.7);
  ContractSpec spec = small_top(4, 1, 3);
  TrainConfig cfg;
  cfg.iterations = 6;
  cfg.batch_size = 16;
  cfg.seed = 7;
  TrainResult a = train_policy(model, spec, cfg);
  TrainResult b = train_policy(model, spec, cfg);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].global_loss == b.log[i].global_loss);
    CHECK(a.log[i].loss_mean == b.log[i].loss_mean);
  }
  for (std::size_t k = 0; k < a.policy.nets.size(); ++k) {
    REQUIRE(a.policy.nets[k].has_value() == b.policy.nets[k].has_value());
    if (a.policy.nets[k])
      CHECK((a.policy.nets[k]->pack() - b.policy.nets[k]->pack()).cwiseAbs().maxCoeff() == 0.0);
  }
  cfg.seed = 8;
  TrainResult c = train_policy(model, spec, cfg);
  bool any_diff = false;
  for (std::size_t k = 0; k < a.policy.nets.size(); ++k)
    if (a.policy.nets[k] &&
        (a.policy.nets[k]->pack() - c.policy.nets[k]->pack()).cwiseAbs().maxCoeff() > 0.0)
      any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("log structure: smag tracks norms and weights, snapshots per sweep") {
  FactorModel model = flat_model(4, 0.7);
  ContractSpec spec = small_top(4, 1, 3);
  TrainConfig cfg;
  cfg.iterations = 5;
  cfg.batch_size = 16;
  cfg.seed = 3;

  cfg.scheme = Scheme::SMAG;
  TrainResult smag = train_policy(model, spec, cfg);
  for (const auto& r : smag.log) {
    CHECK(std::isfinite(r.global_loss));
    CHECK(std::isfinite(r.grad_norm_mean));
    // weight invariants hold at every logged step
    CHECK(r.w_sum == doctest::Approx(r.w_mean * r.w_sum / r.w_mean).epsilon(1e-12));
    CHECK(r.w_min >= 1e-3 - 1e-15);
    CHECK(std::isnan(r.snapshot_price));
  }

  cfg.scheme = Scheme::EW;
  TrainResult ew = train_policy(model, spec, cfg);
  for (const auto& r : ew.log) {
    CHECK(r.w_min == 1.0);
    CHECK(r.w_max == 1.0);
    CHECK(std::isnan(r.grad_norm_mean));
  }

  cfg.mode = TrainMode::Sweep;
  cfg.sweeps = 7;
  cfg.validation_paths = 32;
  cfg.scheme = Scheme::UW;
  TrainResult sw = train_policy(model, spec, cfg);
  int snapshots = 0;
  for (const auto& r : sw.log)
    if (r.date == -1) {
      ++snapshots;
      CHECK(std::isfinite(r.snapshot_price));
      CHECK(r.snapshot_ci_low <= r.snapshot_price);
      CHECK(r.snapshot_ci_high >= r.snapshot_price);
    }
  CHECK(snapshots == 7);
  // UW weights never move and are never renormalized
  for (const auto& r : sw.log)
    if (r.date >= 0) {
      CHECK(r.w_min > 0.0);
      CHECK(r.w_max < 1.0);
    }
}

TEST_CASE("config validation and model-contract date mismatch") {
  TrainConfig cfg;
  cfg.iterations = 0;
  CHECK(!cfg.validate().empty());
  cfg = TrainConfig{};
  cfg.batch_size = 1;  // train-mode batch stats need two rows
  CHECK(!cfg.validate().empty());
  cfg = TrainConfig{};
  cfg.net_lr = -0.1;
  CHECK(!cfg.validate().empty());
  CHECK_THROWS_AS(cfg.ensure_valid(), std::invalid_argument);

  FactorModel model = flat_model(5, 0.7);
  ContractSpec spec = small_top(4, 1, 3);
  CHECK_THROWS_AS(train_policy(model, spec, TrainConfig{}), std::invalid_argument);
}
