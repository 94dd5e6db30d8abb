#include "hetsched/engine.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace hetsched {

MachineState::MachineState(const Platform& platform)
    : platform_(platform),
      available_(platform.size(), 0.0),
      intervals_(platform.size()),
      running_(platform.size(), -1) {}

std::pair<int, Time> MachineState::earliest_on(Resource type, Time release) const {
  int best = -1;
  Time best_start = 0;
  int first = platform_.first(type);
  for (int p = first; p < first + platform_.count(type); ++p) {
    Time start = std::max(release, available_[p]);
    if (best < 0 || time_lt(start, best_start)) {
      best = p;
      best_start = start;
    }
  }
  return {best, best_start};
}

Time MachineState::earliest_free(Resource type) const {
  int first = platform_.first(type);
  return *std::min_element(available_.begin() + first, available_.begin() + first + platform_.count(type));
}

void MachineState::occupy(int proc, int task, Time start, Time finish) {
  auto& list = intervals_[proc];
  Interval iv{start, finish, task};
  if (list.empty() || list.back().start <= start) {
    list.push_back(iv);
  } else {
    auto pos = std::upper_bound(list.begin(), list.end(), start,
                                [](Time s, const Interval& other) { return s < other.start; });
    list.insert(pos, iv);
  }
  available_[proc] = std::max(available_[proc], finish);
}

void MachineState::abort(int proc, int task, Time at) {
  auto& list = intervals_[proc];
  auto it = std::find_if(list.begin(), list.end(), [&](const Interval& iv) { return iv.task == task; });
  if (it == list.end()) throw std::logic_error("task not on processor");
  list.erase(it);
  Time avail = at;
  for (const Interval& iv : list) avail = std::max(avail, iv.finish);
  available_[proc] = avail;
  if (running_[proc] == task) running_[proc] = -1;
}

std::vector<int> lpt_order(std::span<const Task> tasks, Resource side) {
  std::vector<const Task*> sorted;
  sorted.reserve(tasks.size());
  for (const Task& t : tasks) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [side](const Task* a, const Task* b) {
    Time ta = a->time_on(side);
    Time tb = b->time_on(side);
    if (ta != tb) return ta > tb;
    return a->id < b->id;
  });
  std::vector<int> ids;
  ids.reserve(sorted.size());
  for (const Task* t : sorted) ids.push_back(t->id);
  return ids;
}

Schedule list_schedule(const Instance& instance, const Platform& platform, const Assignment& assignment,
                       std::span<const int> order) {
  if (assignment.size() != instance.size()) throw std::invalid_argument("assignment size mismatch");
  std::vector<PoolKey> keys(instance.size());
  std::vector<bool> listed(instance.size(), false);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    std::size_t i = instance.index_of(order[pos]);
    if (listed[i]) throw std::invalid_argument("task listed twice in order");
    listed[i] = true;
    keys[i] = PoolKey{static_cast<double>(pos), 0, order[pos], static_cast<int>(i)};
  }
  if (std::find(listed.begin(), listed.end(), false) != listed.end()) {
    throw std::invalid_argument("order does not cover every task");
  }
  AssignedPool pool(assignment, std::move(keys));
  return simulate(instance, platform, pool);
}

Schedule lpt_schedule(const Instance& instance, const Platform& platform, const Assignment& assignment) {
  std::vector<int> order(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    Time ta = instance.task(a).time_on(assignment[a]);
    Time tb = instance.task(b).time_on(assignment[b]);
    if (ta != tb) return ta > tb;
    return instance.task(a).id < instance.task(b).id;
  });
  for (int& i : order) i = instance.task(i).id;
  return list_schedule(instance, platform, assignment, order);
}

std::pair<int, Time> eft_insertion_place(std::size_t task, const Instance& instance, const MachineState& machines,
                                         const Schedule& schedule) {
  Time release = 0;
  for (int p : instance.preds(task)) {
    if (!schedule[p].placed()) throw std::logic_error("predecessor not placed");
    release = std::max(release, schedule[p].finish);
  }
  const Platform& platform = machines.platform();
  int best_proc = -1;
  Time best_start = 0;
  Time best_finish = 0;
  for (int proc = 0; proc < platform.size(); ++proc) {
    Time d = instance.task(task).time_on(platform.type_of(proc));
    Time start = release;
    for (const Interval& iv : machines.intervals(proc)) {
      if (time_le(start + d, iv.start)) break;
      start = std::max(start, iv.finish);
    }
    Time finish = start + d;
    if (best_proc < 0 || time_lt(finish, best_finish)) {
      best_proc = proc;
      best_start = start;
      best_finish = finish;
    }
  }
  return {best_proc, best_start};
}

AssignedPool::AssignedPool(Assignment assignment, std::vector<PoolKey> static_keys)
    : assignment_(std::move(assignment)), keys_(std::move(static_keys)) {}

void AssignedPool::push(int task, Time release) {
  double lead = by_release_ ? release : 0.0;
  queues_[static_cast<int>(assignment_[task])].emplace(lead, keys_[task]);
}

std::optional<int> AssignedPool::pop(Resource type) {
  auto& q = queues_[static_cast<int>(type)];
  if (q.empty()) return std::nullopt;
  int task = q.begin()->second.task;
  q.erase(q.begin());
  return task;
}

SharedPool::SharedPool(std::vector<PoolKey> cpu_keys, std::vector<PoolKey> gpu_keys)
    : cpu_keys_(std::move(cpu_keys)), gpu_keys_(std::move(gpu_keys)) {}

void SharedPool::push(int task, Time) {
  cpu_order_.insert(cpu_keys_[task]);
  gpu_order_.insert(gpu_keys_[task]);
}

std::optional<int> SharedPool::pop(Resource type) {
  auto& mine = type == Resource::cpu ? cpu_order_ : gpu_order_;
  if (mine.empty()) return std::nullopt;
  int task = mine.begin()->task;
  mine.erase(mine.begin());
  if (type == Resource::cpu) {
    gpu_order_.erase(gpu_keys_[task]);
  } else {
    cpu_order_.erase(cpu_keys_[task]);
  }
  return task;
}

std::optional<int> spoliate(MachineState& machines, Schedule& schedule, const Instance& instance, int idle_proc,
                            Time now, std::span<const int> candidates, std::span<const double> priority) {
  const Platform& platform = machines.platform();
  Resource mine = platform.type_of(idle_proc);
  int victim = -1;
  for (int t : candidates) {
    const Placement& p = schedule[t];
    if (!p.placed() || platform.type_of(p.proc) == mine) continue;
    if (machines.running(p.proc) != t) continue;
    Time restarted = now + instance.task(t).time_on(mine);
    if (!time_lt(restarted, p.finish)) continue;
    if (victim < 0) {
      victim = t;
      continue;
    }
    if (!priority.empty() && priority[t] != priority[victim]) {
      if (priority[t] > priority[victim]) victim = t;
      continue;
    }
    const Placement& best = schedule[victim];
    if (p.finish > best.finish || (p.finish == best.finish && instance.task(t).id < instance.task(victim).id)) {
      victim = t;
    }
  }
  if (victim < 0) return std::nullopt;
  machines.abort(schedule[victim].proc, victim, now);
  place(schedule, instance, platform, victim, idle_proc, now);
  machines.occupy(idle_proc, victim, now, schedule[victim].finish);
  machines.set_running(idle_proc, victim);
  return victim;
}

Schedule simulate(const Instance& instance, const Platform& platform, ReadyPool& pool,
                  const SpoliationRule* spoliation) {
  const std::size_t n = instance.size();
  Schedule schedule(n);
  MachineState machines(platform);
  std::vector<std::size_t> missing(n);
  std::vector<Time> release(n, 0.0);
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    missing[i] = instance.preds(i).size();
    if (missing[i] == 0) pool.push(static_cast<int>(i), 0.0);
  }

  using Event = std::pair<Time, int>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::vector<int> candidates;

  auto start_task = [&](int task, int proc, Time now) {
    Time start = std::max(now, release[task]);
    place(schedule, instance, platform, task, proc, start);
    machines.occupy(proc, task, start, schedule[task].finish);
    machines.set_running(proc, task);
    events.emplace(schedule[task].finish, task);
  };

  auto dispatch = [&](Time now) {
    int proc = 0;
    while (proc < platform.size()) {
      if (machines.running(proc) >= 0) {
        ++proc;
        continue;
      }
      Resource type = platform.type_of(proc);
      if (auto task = pool.pop(type)) {
        start_task(*task, proc, now);
        ++proc;
        continue;
      }
      if (spoliation != nullptr) {
        bool allowed = type == Resource::gpu ? spoliation->gpu_from_cpu : spoliation->cpu_from_gpu;
        if (allowed) {
          candidates.clear();
          int first = platform.first(other(type));
          for (int q = first; q < first + platform.count(other(type)); ++q) {
            if (machines.running(q) >= 0) candidates.push_back(machines.running(q));
          }
          auto victim = spoliate(machines, schedule, instance, proc, now, candidates, spoliation->priority);
          if (victim) {
            events.emplace(schedule[*victim].finish, *victim);
            proc = 0;
            continue;
          }
        }
      }
      ++proc;
    }
  };

  std::size_t completed = 0;
  Time now = 0;
  while (true) {
    dispatch(now);
    if (events.empty()) break;
    Time next = events.top().first;
    std::vector<int> finished;
    while (!events.empty() && time_le(events.top().first, next)) {
      auto [finish, task] = events.top();
      events.pop();
      if (done[task] || schedule[task].finish != finish) continue;
      finished.push_back(task);
      next = std::max(next, finish);
    }
    now = std::max(now, next);
    for (int task : finished) {
      done[task] = true;
      ++completed;
      machines.set_running(schedule[task].proc, -1);
      for (int s : instance.succs(task)) {
        release[s] = std::max(release[s], schedule[task].finish);
        if (--missing[s] == 0) pool.push(s, release[s]);
      }
    }
  }
  if (completed != n) throw std::logic_error("simulation left tasks unscheduled");
  return schedule;
}

OnlineSession::OnlineSession(const Platform& platform, OnlinePolicy& policy)
    : platform_(platform), policy_(policy), machines_(platform) {}

Placement OnlineSession::submit(const Task& task, Time arrival, std::span<const int> pred_ids) {
  if (index_.count(task.id) != 0) throw std::invalid_argument("task " + std::to_string(task.id) + " already revealed");
  if (time_lt(arrival, last_arrival_)) throw std::invalid_argument("arrivals must be nondecreasing");
  for (int p : pred_ids) {
    auto it = index_.find(p);
    if (it == index_.end()) throw std::invalid_argument("predecessor " + std::to_string(p) + " not revealed");
    if (time_lt(arrival, placements_[it->second].finish)) {
      throw std::invalid_argument("task " + std::to_string(task.id) + " arrives before predecessor completes");
    }
  }
  last_arrival_ = std::max(last_arrival_, arrival);
  index_.emplace(task.id, tasks_.size());
  tasks_.push_back(task);
  for (int p : pred_ids) edges_.push_back(Edge{p, task.id});

  OnlineView view{platform_, machines_, tasks_, edges_, makespan_};
  int proc = policy_.choose(task, arrival, view);
  if (!platform_.valid_processor(proc)) throw std::logic_error(policy_.name() + " chose an invalid processor");
  Placement placement;
  placement.proc = proc;
  placement.start = std::max(arrival, machines_.available(proc));
  placement.finish = placement.start + task.time_on(platform_.type_of(proc));
  machines_.occupy(proc, static_cast<int>(tasks_.size() - 1), placement.start, placement.finish);
  placements_.push_back(placement);
  makespan_ = std::max(makespan_, placement.finish);
  return placement;
}

const Placement& OnlineSession::placement(int task_id) const { return placements_.at(index_.at(task_id)); }

Instance OnlineSession::instance() const { return Instance(tasks_, edges_); }

Schedule OnlineSession::schedule() const {
  Schedule s(placements_.size());
  s.placements = placements_;
  return s;
}

Schedule online_simulate(const Instance& instance, const Platform& platform, OnlinePolicy& policy) {
  const std::size_t n = instance.size();
  OnlineSession session(platform, policy);
  std::vector<std::size_t> missing(n);
  std::vector<Time> arrival(n, 0.0);
  using Event = std::tuple<Time, int, int>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    missing[i] = instance.preds(i).size();
    if (missing[i] == 0) ready.emplace(0.0, instance.task(i).id, static_cast<int>(i));
  }
  Schedule schedule(n);
  std::vector<int> pred_ids;
  while (!ready.empty()) {
    auto [at, id, i] = ready.top();
    ready.pop();
    pred_ids.clear();
    for (int p : instance.preds(i)) pred_ids.push_back(instance.task(p).id);
    schedule[i] = session.submit(instance.task(i), at, pred_ids);
    for (int s : instance.succs(i)) {
      arrival[s] = std::max(arrival[s], schedule[i].finish);
      if (--missing[s] == 0) ready.emplace(arrival[s], instance.task(s).id, s);
    }
  }
  return schedule;
}

int ect_processor(const Task& task, Time arrival, const MachineState& machines) {
  const Platform& platform = machines.platform();
  int best = -1;
  Time best_finish = 0;
  for (int p = 0; p < platform.size(); ++p) {
    Time finish = std::max(arrival, machines.available(p)) + task.time_on(platform.type_of(p));
    if (best < 0 || time_lt(finish, best_finish)) {
      best = p;
      best_finish = finish;
    }
  }
  return best;
}

int list_processor(Resource type, Time arrival, const MachineState& machines) {
  return machines.earliest_on(type, arrival).first;
}

Time gpu_wait(Time arrival, const MachineState& machines) {
  return std::max(0.0, machines.earliest_free(Resource::gpu) - arrival);
}

}  // namespace hetsched
