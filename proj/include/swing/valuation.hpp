#pragma once

#include <cstdint>

#include "swing/contracts.hpp"
#include "swing/market_model.hpp"
#include "swing/policy.hpp"
#include "swing/volume_grid.hpp"

namespace swing {

struct ValuationResult {
  double price = 0;
  double std_error = 0;
  double ci_low = 0, ci_high = 0;  // price +- 1.96 stderr
  std::int64_t paths = 0;
  std::uint64_t seed = 0;
  int terminal_volume_min = 0;  // min/max Q_n across paths
  int terminal_volume_max = 0;
  double wall_seconds = 0;
};

// Forward Monte Carlo price of a policy: Q starts at 0, each date takes the
// policy's branch (forced on trivial levels), rewards accumulate pathwise and
// the terminal value is added at t_n. Fresh valuation streams, independent of
// training paths. Paths are processed in blocks but summed in strict path
// order with compensated accumulation, so the result is block-size invariant.
ValuationResult evaluate_policy(DecisionPolicy& policy, const FactorModel& model,
                                const ContractSpec& spec, const QGrid& grid, std::int64_t M,
                                std::uint64_t seed);

// Same forward pass on an existing path set (validation snapshots, tests).
ValuationResult evaluate_on_paths(DecisionPolicy& policy, const FactorModel& model,
                                  const ContractSpec& spec, const QGrid& grid,
                                  const PathBatch& paths);

}  // namespace swing
