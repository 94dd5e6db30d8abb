#include "hetsched/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "hetsched/bounds.hpp"
#include "hetsched/dag_offline.hpp"

namespace hetsched {

namespace {

struct IdenticalSearch {
  std::vector<Time> jobs;  // sorted nonincreasing
  int machines = 1;
  std::vector<Time> load;
  std::vector<int> current;
  std::vector<int> best_assign;
  Time best = 0;

  void dfs(std::size_t next, Time span) {
    if (!time_lt(span, best)) return;
    if (next == jobs.size()) {
      best = span;
      best_assign = current;
      return;
    }
    for (int q = 0; q < machines; ++q) {
      bool repeat = false;
      for (int r = 0; r < q; ++r) repeat = repeat || load[r] == load[q];
      if (repeat) continue;
      load[q] += jobs[next];
      current[next] = q;
      dfs(next + 1, std::max(span, load[q]));
      load[q] -= jobs[next];
    }
  }
};

}  // namespace

Time identical_machines_optimum(const std::vector<Time>& durations, int machines, std::vector<int>* machine_of) {
  if (machines < 1) throw std::invalid_argument("need at least one machine");
  const std::size_t n = durations.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return durations[a] > durations[b]; });
  IdenticalSearch search;
  search.machines = machines;
  search.load.assign(machines, 0.0);
  search.current.assign(n, 0);
  for (std::size_t i : order) search.jobs.push_back(durations[i]);
  // LPT as the incumbent.
  std::vector<Time> lpt(machines, 0.0);
  search.best_assign.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int q = static_cast<int>(std::min_element(lpt.begin(), lpt.end()) - lpt.begin());
    lpt[q] += search.jobs[i];
    search.best_assign[i] = q;
  }
  search.best = n == 0 ? 0 : *std::max_element(lpt.begin(), lpt.end());
  if (n > 0) search.dfs(0, 0);
  if (machine_of != nullptr) {
    machine_of->assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) (*machine_of)[order[i]] = search.best_assign[i];
  }
  return search.best;
}

namespace {

OracleResult independent_optimum(const Instance& instance, const Platform& platform) {
  const std::size_t n = instance.size();
  const std::size_t subsets = std::size_t{1} << n;
  auto side_optimum = [&](Resource side, std::size_t mask, std::vector<int>* machine_of) {
    std::vector<Time> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U) d.push_back(instance.task(j).time_on(side));
    }
    return identical_machines_optimum(d, platform.count(side), machine_of);
  };
  std::vector<Time> cpu(subsets);
  std::vector<Time> gpu(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    cpu[mask] = side_optimum(Resource::cpu, mask, nullptr);
    gpu[mask] = side_optimum(Resource::gpu, mask, nullptr);
  }
  const std::size_t full = subsets - 1;
  std::size_t best_mask = 0;
  Time best = std::max(cpu[0], gpu[full]);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    Time value = std::max(cpu[mask], gpu[full ^ mask]);
    if (time_lt(value, best)) {
      best = value;
      best_mask = mask;
    }
  }
  OracleResult result;
  result.makespan = best;
  result.nodes = subsets;
  result.witness = Schedule(n);
  for (Resource side : {Resource::cpu, Resource::gpu}) {
    std::size_t mask = side == Resource::cpu ? best_mask : full ^ best_mask;
    std::vector<int> machine_of;
    side_optimum(side, mask, &machine_of);
    std::vector<Time> avail(platform.count(side), 0.0);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1U)) continue;
      int q = machine_of[pos++];
      place(result.witness, instance, platform, j, platform.first(side) + q, avail[q]);
      avail[q] = result.witness[j].finish;
    }
  }
  result.makespan = makespan(result.witness);
  return result;
}

class DagSearch {
 public:
  DagSearch(const Instance& instance, const Platform& platform, Time incumbent, Schedule witness, Time floor)
      : inst_(instance),
        plat_(platform),
        n_(instance.size()),
        best_(incumbent),
        best_schedule_(std::move(witness)),
        floor_(floor),
        current_(instance.size()),
        placed_(instance.size(), false),
        avail_(platform.size(), 0.0),
        est_(instance.size(), 0.0) {
    by_alpha_.resize(n_);
    std::iota(by_alpha_.begin(), by_alpha_.end(), 0);
    std::sort(by_alpha_.begin(), by_alpha_.end(), [&](int a, int b) {
      double aa = inst_.task(a).acceleration();
      double ab = inst_.task(b).acceleration();
      if (aa != ab) return aa < ab;
      return inst_.task(a).id < inst_.task(b).id;
    });
  }

  OracleResult run() {
    if (time_gt(best_, floor_)) dfs(0, 0.0, -1, 0.0);
    return OracleResult{makespan(best_schedule_), best_schedule_, nodes_};
  }

 private:
  void dfs(std::size_t count, Time last_start, int last_id, Time span) {
    ++nodes_;
    if (count == n_) {
      if (time_lt(span, best_)) {
        best_ = span;
        best_schedule_ = current_;
      }
      return;
    }
    if (!time_lt(bound(last_start, span), best_)) return;
    for (std::size_t j = 0; j < n_; ++j) {
      if (placed_[j]) continue;
      Time release = 0;
      bool ready = true;
      for (int p : inst_.preds(j)) {
        if (!placed_[p]) {
          ready = false;
          break;
        }
        release = std::max(release, current_[p].finish);
      }
      if (!ready) continue;
      const int id = inst_.task(j).id;
      for (int proc = 0; proc < plat_.size(); ++proc) {
        if (symmetric_to_earlier(proc)) continue;
        Time start = std::max(release, avail_[proc]);
        if (time_lt(start, last_start) || (time_eq(start, last_start) && id < last_id)) continue;
        Time finish = start + inst_.task(j).time_on(plat_.type_of(proc));
        if (!time_lt(finish, best_)) continue;
        Time saved = avail_[proc];
        placed_[j] = true;
        current_[j] = Placement{proc, start, finish};
        avail_[proc] = finish;
        dfs(count + 1, start, id, std::max(span, finish));
        avail_[proc] = saved;
        placed_[j] = false;
        current_[j] = Placement{};
        if (!time_gt(best_, floor_)) return;
      }
    }
  }

  bool symmetric_to_earlier(int proc) const {
    Resource type = plat_.type_of(proc);
    for (int q = plat_.first(type); q < proc; ++q) {
      if (avail_[q] == avail_[proc]) return true;
    }
    return false;
  }

  /// Lower bound on any completion of the current partial schedule, given
  /// that every remaining task starts no earlier than `last_start`.
  Time bound(Time last_start, Time span) {
    Time lb = span;
    // Longest remaining chain with fastest durations.
    for (int j : inst_.topological_indices()) {
      if (placed_[j]) continue;
      Time est = last_start;
      for (int p : inst_.preds(j)) {
        est = std::max(est, placed_[p] ? current_[p].finish : est_[p] + inst_.task(p).min_time());
      }
      est_[j] = est;
      lb = std::max(lb, est + inst_.task(j).min_time());
    }
    // Area of the remaining work on top of what is already committed.
    Time committed[2] = {0, 0};
    for (int proc = 0; proc < plat_.size(); ++proc) {
      committed[static_cast<int>(plat_.type_of(proc))] += std::max(avail_[proc], last_start);
    }
    Time cpu_left = committed[0];
    Time gpu_left = committed[1];
    for (int j : by_alpha_) {
      if (!placed_[j]) gpu_left += inst_.task(j).gpu;
    }
    const double m = plat_.m;
    const double k = plat_.k;
    Time area = std::max(cpu_left / m, gpu_left / k);
    for (int j : by_alpha_) {
      if (placed_[j]) continue;
      const Task& t = inst_.task(j);
      // Share f of task j moves to the CPUs; equalize both sides if possible.
      double f = (m * (gpu_left) - k * cpu_left) / (k * t.cpu + m * t.gpu);
      f = std::clamp(f, 0.0, 1.0);
      area = std::min(area, std::max((cpu_left + f * t.cpu) / m, (gpu_left - f * t.gpu) / k));
      cpu_left += t.cpu;
      gpu_left -= t.gpu;
    }
    return std::max(lb, area);
  }

  const Instance& inst_;
  const Platform& plat_;
  const std::size_t n_;
  Time best_;
  Schedule best_schedule_;
  Time floor_;
  Schedule current_;
  std::vector<bool> placed_;
  std::vector<Time> avail_;
  std::vector<Time> est_;
  std::vector<int> by_alpha_;
  std::size_t nodes_ = 0;
};

}  // namespace

OracleResult optimal_schedule(const Instance& instance, const Platform& platform, const OracleLimits& limits) {
  if (instance.size() > limits.max_tasks) {
    throw OracleLimitError("oracle refuses " + std::to_string(instance.size()) + " tasks (limit " +
                           std::to_string(limits.max_tasks) + ")");
  }
  if (platform.size() > limits.max_processors) {
    throw OracleLimitError("oracle refuses " + std::to_string(platform.size()) + " processors (limit " +
                           std::to_string(limits.max_processors) + ")");
  }
  if (instance.empty()) return OracleResult{0, Schedule(), 0};
  if (instance.independent()) return independent_optimum(instance, platform);
  Schedule incumbent = heft(instance, platform);
  Schedule alt = offline_ect(instance, platform);
  if (time_lt(makespan(alt), makespan(incumbent))) incumbent = alt;
  Time floor = compute_bounds(instance, platform).best;
  return DagSearch(instance, platform, makespan(incumbent), incumbent, floor).run();
}

}  // namespace hetsched
