#include "swing/policy.hpp"

#include <stdexcept>

namespace swing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

NetPolicy::NetPolicy(QGrid grid, VolumeConstraints constraints)
    : grid_(std::move(grid)), constraints_(constraints) {
  nets.resize(constraints_.n);
}

Eigen::VectorXd NetPolicy::task_features(int k) const {
  const auto& levels = grid_.nontrivial_levels(k);
  VectorXd m(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i)
    m(static_cast<Eigen::Index>(i)) = task_feature_m(constraints_, levels[i]);
  return m;
}

void NetPolicy::begin_date(int k, const Eigen::Ref<const MatrixXd>& states,
                           const Eigen::Ref<const VectorXd>& /*spots*/) {
  if (k < 0 || k >= dates()) throw std::out_of_range("begin_date: date out of range");
  current_date_ = k;
  if (nets[k].has_value())
    trunk_ = nets[k]->eval_trunk(states);
  else
    trunk_.resize(states.rows(), 0);  // all levels trivial, nothing to decide
}

void NetPolicy::decide_rows(int k, int task, int Q, const std::vector<int>& rows,
                            std::vector<char>& up) const {
  if (k != current_date_) throw std::logic_error("decide_rows: begin_date(k) not called");
  if (!nets[k].has_value()) throw std::logic_error("decide_rows: no decisions at this date");
  VectorXd u;
  double b;
  nets[k]->collapsed_head(task, task_feature_m(constraints_, Q), u, b);
  up.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double logit = trunk_.row(rows[i]).dot(u) + b;
    up[i] = logit >= 0.0 ? 1 : 0;
  }
}

BoolMatrix NetPolicy::decide_all(int k) const {
  if (k != current_date_) throw std::logic_error("decide_all: begin_date(k) not called");
  const auto& levels = grid_.nontrivial_levels(k);
  if (levels.empty()) return BoolMatrix(trunk_.rows(), 0);
  MatrixXd logits = nets[k]->eval_logits_from_trunk(trunk_, task_features(k));
  return logits.array() >= 0.0;
}

}  // namespace swing
