#pragma once

#include <optional>
#include <vector>

#include "hetsched/lp.hpp"
#include "hetsched/model.hpp"

namespace hetsched {

/// Longest single task on its faster side; 0 when empty.
Time trivial_bound(const Instance& instance);

/// Optimum of the area relaxation computed directly: tasks sorted by
/// nondecreasing acceleration (ties by id), the pivot task split so both
/// sides carry the same per-processor load. Edges are ignored.
Time area_bound_closed_form(const Instance& instance, const Platform& platform);

/// Area relaxation: variables x_0..x_{n-1} in [0,1] (share on CPU), then
/// the makespan variable last.
LinearProgram area_program(const Instance& instance, const Platform& platform);
Time area_bound_lp(const Instance& instance, const Platform& platform);

/// Fractional CPU share of every task under the area relaxation.
std::vector<double> area_fractions(const Instance& instance, const Platform& platform);

/// Area relaxation plus fractional critical-path constraints. Variables are
/// x_j, then C_j, then the makespan.
LinearProgram lp_prec_program(const Instance& instance, const Platform& platform);

struct LpPrecSolution {
  Time value = 0;
  std::vector<double> x;
  std::vector<Time> completion;
};
LpPrecSolution lp_prec_bound(const Instance& instance, const Platform& platform);

/// Longest path where every task counts with its faster duration.
Time critical_path_bound(const Instance& instance);

struct BoundReport {
  Time trivial = 0;
  Time area = 0;
  std::optional<Time> lp_prec;
  Time critical_path = 0;
  Time best = 0;
};

/// Tasks above which the precedence LP is skipped in compute_bounds.
inline constexpr std::size_t kLpPrecTaskLimit = 250;

/// All applicable bounds; the precedence LP only for DAGs up to
/// `lp_prec_limit` tasks.
BoundReport compute_bounds(const Instance& instance, const Platform& platform,
                           std::size_t lp_prec_limit = kLpPrecTaskLimit);

}  // namespace hetsched
