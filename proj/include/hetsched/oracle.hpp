#pragma once

#include <stdexcept>

#include "hetsched/model.hpp"

namespace hetsched {

struct OracleLimits {
  std::size_t max_tasks = 8;
  int max_processors = 4;
};

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Time makespan = 0;
  Schedule witness;
  /// Search nodes visited (for diagnostics).
  std::size_t nodes = 0;
};

/// Exact minimum makespan by exhaustive search. Independent tasks: every
/// CPU/GPU split, each side solved exactly. DAGs: branch-and-bound over
/// (ready task, processor) sequences producing semi-active schedules in
/// nondecreasing start order. Throws OracleLimitError outside `limits`.
OracleResult optimal_schedule(const Instance& instance, const Platform& platform, const OracleLimits& limits = {});

inline Time optimal_makespan(const Instance& instance, const Platform& platform, const OracleLimits& limits = {}) {
  return optimal_schedule(instance, platform, limits).makespan;
}

/// Exact P||Cmax: minimum makespan of `durations` on `machines` identical
/// machines; `machine_of` receives the machine of each job.
Time identical_machines_optimum(const std::vector<Time>& durations, int machines, std::vector<int>* machine_of = nullptr);

}  // namespace hetsched
