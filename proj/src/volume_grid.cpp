#include "swing/volume_grid.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace swing {

std::vector<std::string> VolumeConstraints::validate() const {
  std::vector<std::string> bad;
  if (n < 1) bad.push_back("n must be >= 1");
  if (q_min < 0) bad.push_back("q_min must be >= 0");
  if (!(q_min < q_max)) bad.push_back("q_min must be < q_max");
  if (firm) {
    if (Q_min > Q_max) bad.push_back("Q_min must be <= Q_max");
    if (q_max > q_min && (Q_max - Q_min) % (q_max - q_min) != 0)
      bad.push_back("(Q_max - Q_min) must be a multiple of (q_max - q_min) "
                    "for extreme controls to be optimal");
    if (n >= 1 && Q_min > n * q_max)
      bad.push_back("infeasible: Q_min exceeds n * q_max");
    if (n >= 1 && Q_max < n * q_min)
      bad.push_back("infeasible: Q_max below n * q_min");
  }
  return bad;
}

QGrid::QGrid(const VolumeConstraints& c) : c_(c) {
  const auto bad = c.validate();
  if (!bad.empty()) {
    std::ostringstream os;
    os << "invalid volume constraints:";
    for (const auto& m : bad) os << "\n  - " << m;
    throw std::invalid_argument(os.str());
  }

  bounds_.resize(std::size_t(c_.n) + 1);
  for (int k = 0; k <= c_.n; ++k) {
    int lo, hi;
    if (c_.firm) {
      // Both corrections are two-sided: the remaining dates can add at most
      // (n-k) q_max toward Q_min, and must add at least (n-k) q_min below
      // Q_max. The q_min term only matters when q_min > 0.
      lo = std::max(k * c_.q_min, c_.Q_min - (c_.n - k) * c_.q_max);
      hi = std::min(k * c_.q_max, c_.Q_max - (c_.n - k) * c_.q_min);
    } else {
      // decision dates follow the capped-index formula; the terminal set is
      // widened to cover every reachable cumulative volume
      const int kn = std::min(k, c_.n - 1);
      lo = (k == c_.n ? c_.n * c_.q_min : kn * c_.q_min);
      hi = (k == c_.n ? c_.n * c_.q_max : kn * c_.q_max);
    }
    if (lo > hi)
      throw std::invalid_argument("empty attainable set at date " + std::to_string(k));
    bounds_[std::size_t(k)] = {lo, hi};
  }

  nontrivial_.resize(std::size_t(c_.n));
  for (int k = 0; k < c_.n; ++k) {
    auto& list = nontrivial_[std::size_t(k)];
    for (int Q = bounds_[std::size_t(k)].first; Q <= bounds_[std::size_t(k)].second; ++Q) {
      const auto [qm, qp] = admissible_controls(k, Q);
      if (qm != qp) list.push_back(Q);
    }
  }
}

std::pair<int, int> QGrid::cumulative_bounds(int k) const {
  if (k < 0 || k > c_.n) throw std::out_of_range("cumulative_bounds: bad date index");
  return bounds_[std::size_t(k)];
}

int QGrid::levels(int k) const {
  const auto [lo, hi] = cumulative_bounds(k);
  return hi - lo + 1;
}

int QGrid::level_value(int k, int i) const {
  return cumulative_bounds(k).first + i;
}

bool QGrid::contains(int k, int Q) const {
  const auto [lo, hi] = cumulative_bounds(k);
  return Q >= lo && Q <= hi;
}

std::pair<int, int> QGrid::admissible_controls(int k, int Q) const {
  if (k < 0 || k >= c_.n)
    throw std::out_of_range("admissible_controls: bad date index " + std::to_string(k));
  if (!contains(k, Q))
    throw std::out_of_range("cumulative volume Q=" + std::to_string(Q) +
                            " not attainable at date k=" + std::to_string(k));
  const auto [lo1, hi1] = bounds_[std::size_t(k) + 1];
  const int qm = std::max(lo1 - Q, c_.q_min);
  const int qp = std::min(hi1 - Q, c_.q_max);
  return {qm, qp};
}

bool QGrid::is_trivial_task(int k, int Q) const {
  const auto [qm, qp] = admissible_controls(k, Q);
  return qm == qp;
}

const std::vector<int>& QGrid::nontrivial_levels(int k) const {
  if (k < 0 || k >= c_.n)
    throw std::out_of_range("nontrivial_levels: bad date index");
  return nontrivial_[std::size_t(k)];
}

int QGrid::task_index(int k, int Q) const {
  const auto& list = nontrivial_levels(k);
  const auto it = std::lower_bound(list.begin(), list.end(), Q);
  if (it == list.end() || *it != Q) return -1;
  return int(it - list.begin());
}

}  // namespace swing
