#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hetsched/time.hpp"

namespace hetsched {

enum class Resource : std::uint8_t { cpu, gpu };

inline Resource other(Resource r) { return r == Resource::cpu ? Resource::gpu : Resource::cpu; }
const char* to_string(Resource r);

/// A task with one processing time per resource type.
struct Task {
  int id = 0;
  Time cpu = 1;
  Time gpu = 1;

  Time time_on(Resource r) const { return r == Resource::cpu ? cpu : gpu; }
  /// CPU time over GPU time; may be below 1.
  double acceleration() const { return cpu / gpu; }
  Time min_time() const { return std::min(cpu, gpu); }
};

/// m identical CPUs followed by k identical GPUs. Processor indices
/// 0..m-1 are CPUs, m..m+k-1 are GPUs.
struct Platform {
  int m = 1;
  int k = 1;

  Platform() = default;
  Platform(int cpus, int gpus);

  int size() const { return m + k; }
  int count(Resource r) const { return r == Resource::cpu ? m : k; }
  int first(Resource r) const { return r == Resource::cpu ? 0 : m; }
  Resource type_of(int proc) const { return proc < m ? Resource::cpu : Resource::gpu; }
  bool valid_processor(int proc) const { return proc >= 0 && proc < size(); }

  friend bool operator==(const Platform&, const Platform&) = default;
};

struct Edge {
  int from = 0;
  int to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class CycleError : public std::runtime_error {
 public:
  CycleError(int task_id, const std::string& what) : std::runtime_error(what), task_id_(task_id) {}
  int task_id() const { return task_id_; }

 private:
  int task_id_;
};

/// Ids in topological order, ties broken by ascending id.
/// Throws CycleError naming a task that lies on a cycle.
std::vector<int> topological_order(std::span<const Task> tasks, std::span<const Edge> edges);

/// Task set plus an optional precedence DAG. Immutable after construction;
/// the constructor enforces positive durations, unique ids, known edge
/// endpoints, no self-loops or duplicate edges, and acyclicity.
class Instance {
 public:
  Instance() = default;
  explicit Instance(std::vector<Task> tasks, std::vector<Edge> edges = {});

  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }
  bool independent() const { return edges_.empty(); }

  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& task(std::size_t index) const { return tasks_[index]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t index_of(int id) const;
  bool contains(int id) const { return index_.count(id) != 0; }

  /// Predecessor / successor task indices.
  const std::vector<int>& preds(std::size_t index) const { return preds_[index]; }
  const std::vector<int>& succs(std::size_t index) const { return succs_[index]; }

  /// Task indices in topological order (ties by ascending id).
  const std::vector<int>& topological_indices() const { return topo_; }
  std::vector<int> topological_ids() const;

 private:
  std::vector<Task> tasks_;
  std::vector<Edge> edges_;
  std::unordered_map<int, std::size_t> index_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
  std::vector<int> topo_;
};

/// Per-task side choice, indexed like Instance::tasks().
using Assignment = std::vector<Resource>;

struct Loads {
  Time cpu = 0;
  Time gpu = 0;
};
Loads loads(const Instance& instance, const Assignment& assignment);

struct Placement {
  int proc = -1;
  Time start = 0;
  Time finish = 0;

  bool placed() const { return proc >= 0; }
};

/// Placements indexed like Instance::tasks().
struct Schedule {
  std::vector<Placement> placements;

  Schedule() = default;
  explicit Schedule(std::size_t n) : placements(n) {}

  std::size_t size() const { return placements.size(); }
  Placement& operator[](std::size_t i) { return placements[i]; }
  const Placement& operator[](std::size_t i) const { return placements[i]; }
};

Time makespan(const Schedule& schedule);

/// Places `task` on `proc` at `start` with the matching duration.
void place(Schedule& schedule, const Instance& instance, const Platform& platform, std::size_t task,
           int proc, Time start);

enum class ViolationKind { missing_task, bad_processor, bad_duration, negative_start, overlap, precedence };
const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int task_id;
  std::string message;
};

/// Empty when the schedule is feasible; otherwise the first violated rule.
std::optional<Violation> validate(const Schedule& schedule, const Instance& instance, const Platform& platform);

}  // namespace hetsched
