#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "swing/contracts.hpp"
#include "swing/net.hpp"
#include "swing/volume_grid.hpp"

namespace swing {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// A trained exercise rule: given a date's state batch, says for each path and
// each nontrivial cumulative level whether to take the upper admissible
// control. Callers prime a date once with begin_date (the expensive shared
// work: trunk or basis evaluation) and then query decisions per level subset
// or for the whole level list.
class DecisionPolicy {
 public:
  virtual ~DecisionPolicy() = default;

  virtual int dates() const = 0;

  // states: M x d factor batch for date k; spots: the M spot prices at k
  // (ignored by policies that decide on factors alone).
  virtual void begin_date(int k, const Eigen::Ref<const Eigen::MatrixXd>& states,
                          const Eigen::Ref<const Eigen::VectorXd>& spots) = 0;

  // Upper-branch indicator for the cached rows listed in `rows`, at the
  // nontrivial task `task` (the date's nontrivial-level index) holding
  // cumulative volume Q. Output is resized to rows.size().
  virtual void decide_rows(int k, int task, int Q, const std::vector<int>& rows,
                           std::vector<char>& up) const = 0;

  // M x I upper-branch indicators across all nontrivial levels at date k.
  virtual BoolMatrix decide_all(int k) const = 0;
};

// Neural policy: one multitask net per date that has at least one nontrivial
// level (date 0 degenerates to the scalar form). Decisions are logit signs,
// f >= 1/2 <=> logit >= 0, so eval never needs the sigmoid.
class NetPolicy : public DecisionPolicy {
 public:
  NetPolicy(QGrid grid, VolumeConstraints constraints);

  int dates() const override { return grid_.constraints().n; }
  const QGrid& grid() const { return grid_; }

  void begin_date(int k, const Eigen::Ref<const Eigen::MatrixXd>& states,
                  const Eigen::Ref<const Eigen::VectorXd>& spots) override;
  void decide_rows(int k, int task, int Q, const std::vector<int>& rows,
                   std::vector<char>& up) const override;
  BoolMatrix decide_all(int k) const override;

  // Per-task m features for date k's nontrivial levels.
  Eigen::VectorXd task_features(int k) const;

  // nets[k] engaged iff date k has nontrivial levels.
  std::vector<std::optional<MultitaskNet>> nets;

 private:
  QGrid grid_;
  VolumeConstraints constraints_;
  int current_date_ = -1;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> trunk_;
};

}  // namespace swing
