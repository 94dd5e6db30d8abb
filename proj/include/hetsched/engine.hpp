#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hetsched/model.hpp"

namespace hetsched {

struct Interval {
  Time start = 0;
  Time finish = 0;
  int task = -1;
};

/// Per-processor occupation: sorted disjoint intervals, availability, and
/// the task currently running (for event-driven simulations).
class MachineState {
 public:
  explicit MachineState(const Platform& platform);

  const Platform& platform() const { return platform_; }
  Time available(int proc) const { return available_[proc]; }
  const std::vector<Interval>& intervals(int proc) const { return intervals_[proc]; }
  int running(int proc) const { return running_[proc]; }

  /// Processor of `type` where a task released at `release` can start the
  /// earliest without insertion; lowest index on ties.
  std::pair<int, Time> earliest_on(Resource type, Time release) const;
  /// Earliest instant at which some processor of `type` is free.
  Time earliest_free(Resource type) const;

  void occupy(int proc, int task, Time start, Time finish);
  void set_running(int proc, int task) { running_[proc] = task; }
  /// Drops `task` from `proc`; the processor is free again from `at`.
  void abort(int proc, int task, Time at);

 private:
  Platform platform_;
  std::vector<Time> available_;
  std::vector<std::vector<Interval>> intervals_;
  std::vector<int> running_;
};

/// Task ids by nonincreasing time on `side`, ties by ascending id.
std::vector<int> lpt_order(std::span<const Task> tasks, Resource side);

/// Graham list scheduling restricted per side by `assignment`: whenever a
/// processor is idle it starts the first ready task of its type in `order`
/// (a list of task ids). Never inserts into gaps.
Schedule list_schedule(const Instance& instance, const Platform& platform, const Assignment& assignment,
                       std::span<const int> order);

/// List scheduling of each side in LPT order.
Schedule lpt_schedule(const Instance& instance, const Platform& platform, const Assignment& assignment);

/// Best (processor, start) over all processors for `task`, allowed to fill
/// an idle gap; minimizes completion, ties by lowest processor index.
/// Predecessors must already be placed in `schedule`.
std::pair<int, Time> eft_insertion_place(std::size_t task, const Instance& instance, const MachineState& machines,
                                         const Schedule& schedule);

// ---------------------------------------------------------------------------
// Event-driven simulation with a pluggable ready pool.

struct PoolKey {
  double primary = 0;
  double secondary = 0;
  int id = 0;
  int task = 0;

  friend bool operator<(const PoolKey& a, const PoolKey& b) {
    return std::tie(a.primary, a.secondary, a.id, a.task) < std::tie(b.primary, b.secondary, b.id, b.task);
  }
};

/// Ready tasks waiting for a processor. pop() returns the task an idle
/// processor of the given type should start, if any.
class ReadyPool {
 public:
  virtual ~ReadyPool() = default;
  virtual void push(int task, Time release) = 0;
  virtual std::optional<int> pop(Resource type) = 0;
};

/// One ordered queue per side; a task only goes to its assigned side.
/// Smallest key first.
class AssignedPool : public ReadyPool {
 public:
  AssignedPool(Assignment assignment, std::vector<PoolKey> static_keys);

  void push(int task, Time release) override;
  std::optional<int> pop(Resource type) override;

  /// When set, keys are (release, static primary, static secondary, id).
  void order_by_release(bool on) { by_release_ = on; }

 private:
  Assignment assignment_;
  std::vector<PoolKey> keys_;
  bool by_release_ = false;
  std::set<std::pair<double, PoolKey>> queues_[2];
};

/// A single pool both sides draw from, each through its own ordering
/// (CPU takes the smallest cpu key, GPU the smallest gpu key).
class SharedPool : public ReadyPool {
 public:
  SharedPool(std::vector<PoolKey> cpu_keys, std::vector<PoolKey> gpu_keys);

  void push(int task, Time release) override;
  std::optional<int> pop(Resource type) override;

 private:
  std::vector<PoolKey> cpu_keys_;
  std::vector<PoolKey> gpu_keys_;
  std::set<PoolKey> cpu_order_;
  std::set<PoolKey> gpu_order_;
};

/// Which running tasks an idle processor may take over when the pool has
/// nothing for it.
struct SpoliationRule {
  bool gpu_from_cpu = true;
  bool cpu_from_gpu = true;
  /// Optional per-task priority; higher wins before the finish-time rule.
  std::vector<double> priority;
};

/// Among running `candidates` on the side opposite to `idle_proc` that would
/// finish strictly earlier if restarted there at `now`, picks the one with
/// the highest finish time (ties: ascending id), or the highest priority
/// when `priority` is non-empty. The chosen task is removed from its old
/// processor, its partial work discarded, and restarted on `idle_proc`.
std::optional<int> spoliate(MachineState& machines, Schedule& schedule, const Instance& instance, int idle_proc,
                            Time now, std::span<const int> candidates, std::span<const double> priority = {});

/// Runs the event loop: at each event time, idle processors (ascending
/// index) take work from `pool`; if the pool has nothing for a processor and
/// a rule is given, it may spoliate.
Schedule simulate(const Instance& instance, const Platform& platform, ReadyPool& pool,
                  const SpoliationRule* spoliation = nullptr);

// ---------------------------------------------------------------------------
// On-line model: tasks are revealed when ready and placed immediately.

struct ReadyEvent {
  int task_id = 0;
  Time arrival = 0;
};

struct OnlineView {
  const Platform& platform;
  const MachineState& machines;
  std::span<const Task> revealed;
  std::span<const Edge> revealed_edges;
  Time makespan = 0;
};

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  virtual std::string name() const = 0;
  /// Processor for `task`; it starts there at max(arrival, availability).
  /// May only look at the view, never at future tasks.
  virtual int choose(const Task& task, Time arrival, const OnlineView& view) = 0;
  /// Fresh copy with initial state, for independent replays.
  virtual std::unique_ptr<OnlinePolicy> clone_fresh() const = 0;
};

/// Feeds tasks one at a time to a policy and records irrevocable placements.
class OnlineSession {
 public:
  OnlineSession(const Platform& platform, OnlinePolicy& policy);

  /// Reveals `task` at `arrival` with its predecessors (already revealed).
  Placement submit(const Task& task, Time arrival, std::span<const int> pred_ids = {});

  Time makespan() const { return makespan_; }
  const Placement& placement(int task_id) const;
  const std::vector<Task>& revealed() const { return tasks_; }

  Instance instance() const;
  Schedule schedule() const;

 private:
  Platform platform_;
  OnlinePolicy& policy_;
  MachineState machines_;
  std::vector<Task> tasks_;
  std::vector<Edge> edges_;
  std::vector<Placement> placements_;
  std::unordered_map<int, std::size_t> index_;
  Time makespan_ = 0;
  Time last_arrival_ = 0;
};

/// Reveals each task when its predecessors complete, in nondecreasing
/// arrival time with ties by ascending id.
Schedule online_simulate(const Instance& instance, const Platform& platform, OnlinePolicy& policy);

/// Processor minimizing completion over all processors, lowest index on ties.
int ect_processor(const Task& task, Time arrival, const MachineState& machines);
/// Processor of `type` with the earliest start, lowest index on ties.
int list_processor(Resource type, Time arrival, const MachineState& machines);
/// Wait until some GPU is idle, measured from `arrival`.
Time gpu_wait(Time arrival, const MachineState& machines);

}  // namespace hetsched
