#include "hetsched/dag_offline.hpp"

#include <stdexcept>

#include "hetsched/bounds.hpp"
#include "hetsched/engine.hpp"

namespace hetsched {

std::vector<double> average_costs(const Instance& instance, const Platform& platform) {
  std::vector<double> w(instance.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const Task& t = instance.task(j);
    w[j] = (platform.m * t.cpu + platform.k * t.gpu) / platform.size();
  }
  return w;
}

std::vector<double> upward_ranks(const Instance& instance, const Platform& platform) {
  std::vector<double> w = average_costs(instance, platform);
  std::vector<double> rank(instance.size(), 0.0);
  const auto& topo = instance.topological_indices();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    double tail = 0;
    for (int s : instance.succs(*it)) tail = std::max(tail, rank[s]);
    rank[*it] = w[*it] + tail;
  }
  return rank;
}

std::vector<int> hop_bottom_levels(const Instance& instance) {
  std::vector<int> level(instance.size(), 0);
  const auto& topo = instance.topological_indices();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (int s : instance.succs(*it)) level[*it] = std::max(level[*it], level[s] + 1);
  }
  return level;
}

std::vector<int> decreasing_order(const Instance& instance, const std::vector<double>& value) {
  std::vector<int> order(instance.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (value[a] != value[b]) return value[a] > value[b];
    return instance.task(a).id < instance.task(b).id;
  });
  return order;
}

Schedule heft(const Instance& instance, const Platform& platform) {
  Schedule schedule(instance.size());
  MachineState machines(platform);
  for (int j : decreasing_order(instance, upward_ranks(instance, platform))) {
    auto [proc, start] = eft_insertion_place(j, instance, machines, schedule);
    place(schedule, instance, platform, j, proc, start);
    machines.occupy(proc, j, start, schedule[j].finish);
  }
  return schedule;
}

namespace {

Time release_of(std::size_t j, const Instance& instance, const Schedule& schedule) {
  Time release = 0;
  for (int p : instance.preds(j)) release = std::max(release, schedule[p].finish);
  return release;
}

/// Static list scheduling: the best ready task by `better` is placed next,
/// at the start and processor chosen by `where`.
template <typename Better, typename Where>
Schedule greedy_ready(const Instance& instance, const Platform& platform, Better better, Where where) {
  const std::size_t n = instance.size();
  Schedule schedule(n);
  MachineState machines(platform);
  std::vector<std::size_t> missing(n);
  std::vector<int> ready;
  for (std::size_t j = 0; j < n; ++j) {
    missing[j] = instance.preds(j).size();
    if (missing[j] == 0) ready.push_back(static_cast<int>(j));
  }
  while (!ready.empty()) {
    auto pick = ready.begin();
    for (auto it = ready.begin() + 1; it != ready.end(); ++it) {
      if (better(*it, *pick, machines, schedule)) pick = it;
    }
    int j = *pick;
    ready.erase(pick);
    Time release = release_of(j, instance, schedule);
    int proc = where(j, release, machines);
    Time start = std::max(release, machines.available(proc));
    place(schedule, instance, platform, j, proc, start);
    machines.occupy(proc, j, start, schedule[j].finish);
    for (int s : instance.succs(j)) {
      if (--missing[s] == 0) ready.push_back(s);
    }
  }
  return schedule;
}

}  // namespace

Schedule offline_ect(const Instance& instance, const Platform& platform) {
  std::vector<int> level = hop_bottom_levels(instance);
  auto better = [&](int a, int b, const MachineState&, const Schedule&) {
    if (level[a] != level[b]) return level[a] > level[b];
    return instance.task(a).id < instance.task(b).id;
  };
  auto where = [&](int j, Time release, const MachineState& machines) {
    return ect_processor(instance.task(j), release, machines);
  };
  return greedy_ready(instance, platform, better, where);
}

Schedule heteroprio_dag(const Instance& instance, const Platform& platform) {
  const std::size_t n = instance.size();
  std::vector<double> rank = upward_ranks(instance, platform);
  std::vector<PoolKey> cpu_keys(n);
  std::vector<PoolKey> gpu_keys(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Task& t = instance.task(j);
    int task = static_cast<int>(j);
    cpu_keys[j] = PoolKey{t.acceleration(), -rank[j], t.id, task};
    gpu_keys[j] = PoolKey{-t.acceleration(), -rank[j], t.id, task};
  }
  SharedPool pool(std::move(cpu_keys), std::move(gpu_keys));
  SpoliationRule rule;
  rule.cpu_from_gpu = false;
  rule.priority = rank;
  return simulate(instance, platform, pool, &rule);
}

const char* to_string(HlpOrder order) { return order == HlpOrder::est ? "est" : "ols"; }

Assignment hlp_assignment(const Instance& instance, const Platform& platform) {
  LpPrecSolution lp = lp_prec_bound(instance, platform);
  Assignment x(instance.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = lp.x[j] >= 0.5 - kTimeTolerance ? Resource::cpu : Resource::gpu;
  return x;
}

Schedule hlp_list_phase(const Instance& instance, const Platform& platform, const Assignment& x, HlpOrder order,
                        bool spoliation) {
  if (x.size() != instance.size()) throw std::invalid_argument("assignment size mismatch");
  std::vector<double> rank = upward_ranks(instance, platform);
  if (order == HlpOrder::est && !spoliation) {
    auto start_of = [&](int j, const MachineState& machines, const Schedule& schedule) {
      return std::max(release_of(j, instance, schedule), machines.earliest_free(x[j]));
    };
    auto better = [&](int a, int b, const MachineState& machines, const Schedule& schedule) {
      Time sa = start_of(a, machines, schedule);
      Time sb = start_of(b, machines, schedule);
      if (!time_eq(sa, sb)) return sa < sb;
      if (rank[a] != rank[b]) return rank[a] > rank[b];
      return instance.task(a).id < instance.task(b).id;
    };
    auto where = [&](int j, Time release, const MachineState& machines) {
      return list_processor(x[j], release, machines);
    };
    return greedy_ready(instance, platform, better, where);
  }
  std::vector<PoolKey> keys(instance.size());
  for (std::size_t j = 0; j < keys.size(); ++j) {
    keys[j] = PoolKey{-rank[j], 0, instance.task(j).id, static_cast<int>(j)};
  }
  AssignedPool pool(x, std::move(keys));
  pool.order_by_release(order == HlpOrder::est);
  if (!spoliation) return simulate(instance, platform, pool);
  SpoliationRule rule;
  rule.cpu_from_gpu = false;
  return simulate(instance, platform, pool, &rule);
}

Schedule hlp(const Instance& instance, const Platform& platform, HlpOrder order, bool spoliation,
             std::size_t task_limit) {
  if (instance.size() > task_limit) throw std::length_error("instance too large for the HLP linear program");
  if (instance.empty()) return Schedule();
  return hlp_list_phase(instance, platform, hlp_assignment(instance, platform), order, spoliation);
}

}  // namespace hetsched
