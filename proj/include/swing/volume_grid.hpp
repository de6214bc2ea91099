#pragma once

#include <string>
#include <utility>
#include <vector>

namespace swing {

// Integer volume-constraint geometry. q bounds apply per date, Q bounds to the
// cumulative purchase. firm = true means the global bounds are hard (take-or-
// pay); firm = false is the penalty variant where terminal violations are
// priced, not forbidden.
struct VolumeConstraints {
  int q_min = 0;
  int q_max = 1;
  int Q_min = 0;
  int Q_max = 0;
  int n = 0;
  bool firm = true;

  // Every violated invariant, one message each; empty means valid.
  // Firm constraints additionally require (Q_max - Q_min) to be a multiple of
  // (q_max - q_min): the condition under which extreme controls are optimal.
  std::vector<std::string> validate() const;
};

// Attainable cumulative levels per date plus admissible increments.
// Firm case (dates 0..n):  Q_k in [max(k q_min, Q_min - (n-k) q_max),
//                                  min(k q_max, Q_max - (n-k) q_min)]
// (the upper correction is inert when q_min = 0)
// Penalty case: Q_k in [k q_min, k q_max] for k <= n-1; the terminal set runs
// to n q_max so the value recursion covers every reachable cumulative volume.
class QGrid {
 public:
  explicit QGrid(const VolumeConstraints& c);  // throws listing violations

  const VolumeConstraints& constraints() const { return c_; }
  int n() const { return c_.n; }

  std::pair<int, int> cumulative_bounds(int k) const;  // [Q_k^d, Q_k^u]
  int levels(int k) const;                             // I_k = Q^u - Q^d + 1
  int level_value(int k, int i) const;                 // Q_k^d + i
  bool contains(int k, int Q) const;

  // q^-(Q) = max(Q_{k+1}^d - Q, q_min), q^+(Q) = min(Q_{k+1}^u - Q, q_max);
  // throws naming (k, Q) when Q is not attainable at k. Requires k < n.
  std::pair<int, int> admissible_controls(int k, int Q) const;

  // single feasible increment: nothing to learn at this (date, level)
  bool is_trivial_task(int k, int Q) const;

  // attainable Q with q^- != q^+ at date k < n, ascending
  const std::vector<int>& nontrivial_levels(int k) const;
  // position of Q within nontrivial_levels(k); -1 if absent
  int task_index(int k, int Q) const;

 private:
  VolumeConstraints c_;
  std::vector<std::pair<int, int>> bounds_;       // size n+1
  std::vector<std::vector<int>> nontrivial_;      // size n
};

}  // namespace swing
