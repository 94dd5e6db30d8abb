#pragma once

#include <vector>

#include "hetsched/model.hpp"

namespace hetsched {

// Off-line algorithms for tasks with precedence constraints. Independent
// instances are accepted as DAGs without edges.

/// Average cost (m * cpu + k * gpu) / (m + k) of every task.
std::vector<double> average_costs(const Instance& instance, const Platform& platform);

/// Upward rank: average cost plus the largest rank among successors
/// (communication costs are zero). Indexed like Instance::tasks().
std::vector<double> upward_ranks(const Instance& instance, const Platform& platform);

/// Number of edges on the longest path from each task to a sink.
std::vector<int> hop_bottom_levels(const Instance& instance);

/// Task indices by decreasing value, ties by ascending id.
std::vector<int> decreasing_order(const Instance& instance, const std::vector<double>& value);

/// Decreasing rank, each task placed at its earliest finish with gap
/// insertion.
Schedule heft(const Instance& instance, const Platform& platform);

/// Ready tasks by decreasing hop bottom level (ties by id), each placed on
/// the processor that completes it first, without insertion.
Schedule offline_ect(const Instance& instance, const Platform& platform);

/// Event-driven HeteroPrio over ready tasks: CPUs take the lowest
/// acceleration, GPUs the highest, ties by higher rank then id. An idle
/// GPU may spoliate the highest-rank CPU task it would finish earlier.
Schedule heteroprio_dag(const Instance& instance, const Platform& platform);

enum class HlpOrder { est, ols };
const char* to_string(HlpOrder order);

/// Sides from rounding the precedence LP: CPU iff its CPU share is >= 1/2.
Assignment hlp_assignment(const Instance& instance, const Platform& platform);

inline constexpr std::size_t kHlpTaskLimit = 400;

/// HLP. `est`: repeatedly start the ready task with the earliest achievable
/// start on its side (ties by higher rank, then id). `ols`: list scheduling
/// by decreasing rank. With spoliation, an idle GPU may take over a running
/// CPU task it would finish earlier; the event loop then orders ready tasks
/// by (release, rank, id) for `est`.
/// Throws std::length_error above `task_limit` tasks (dense LP).
Schedule hlp(const Instance& instance, const Platform& platform, HlpOrder order, bool spoliation = false,
             std::size_t task_limit = kHlpTaskLimit);

/// HLP list phase for a given assignment (no LP).
Schedule hlp_list_phase(const Instance& instance, const Platform& platform, const Assignment& x, HlpOrder order,
                        bool spoliation);

}  // namespace hetsched
