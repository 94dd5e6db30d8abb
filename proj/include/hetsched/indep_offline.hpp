#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "hetsched/model.hpp"

namespace hetsched {

// Off-line algorithms for independent tasks. Precedence edges, if present,
// are rejected with std::invalid_argument.

struct DualSearchConfig {
  Time lower = 0;
  Time upper = 0;
  double epsilon = 1e-3;
};

struct DualSearchResult {
  Schedule schedule;
  Time lambda = 0;
  int iterations = 0;
  bool fallback = false;
};

/// A guess returns a schedule, or nothing when the guess is refuted.
using GuessFn = std::function<std::optional<Schedule>(Time lambda)>;

/// Bisection on [lower, upper] until the gap is at most epsilon * lower.
/// Returns the schedule of the smallest accepted guess; if no bisection
/// point is accepted, the upper bound itself is tried, then `fallback`.
DualSearchResult dual_search(const GuessFn& guess, const DualSearchConfig& config, const Schedule& fallback);

/// lower = max(trivial, area) bound, upper = Sorted-ECT makespan.
DualSearchConfig default_dual_config(const Instance& instance, const Platform& platform);

std::optional<Schedule> dualhp_guess(const Instance& instance, const Platform& platform, Time lambda);
Schedule dualhp(const Instance& instance, const Platform& platform, double epsilon = 1e-3);

/// Shelf dynamic program for one guess; GPU time is counted in units of
/// lambda/(2n). Throws std::length_error when n^2*k*m exceeds 1e8.
std::optional<Schedule> dp32_guess(const Instance& instance, const Platform& platform, Time lambda);
Schedule dp32(const Instance& instance, const Platform& platform, double epsilon = 1e-3);
inline constexpr double kDpStateLimit = 1e8;

Schedule heteroprio(const Instance& instance, const Platform& platform);

/// max(W_cpu/m, W_gpu/k, longest CPU task, longest GPU task).
Time allocation_estimate(const Instance& instance, const Platform& platform, const Assignment& x);

struct BalancedAllocation {
  Assignment best;
  Assignment inversion;
};
BalancedAllocation balanced_allocation(const Instance& instance, const Platform& platform);
Schedule balanced_estimate(const Instance& instance, const Platform& platform);
Schedule balanced_makespan(const Instance& instance, const Platform& platform);

Schedule clb2c(const Instance& instance, const Platform& platform);
Schedule sorted_ect(const Instance& instance, const Platform& platform);
Schedule minmin(const Instance& instance, const Platform& platform);
Schedule round_lp(const Instance& instance, const Platform& platform);

/// Makespan of LPT list scheduling on each side under `x` (same value as
/// makespan(lpt_schedule(...)), computed without building the schedule).
Time lpt_makespan(const Instance& instance, const Platform& platform, const Assignment& x);

}  // namespace hetsched
