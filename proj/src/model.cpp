#include "hetsched/model.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace hetsched {

const char* to_string(Resource r) { return r == Resource::cpu ? "cpu" : "gpu"; }

Platform::Platform(int cpus, int gpus) : m(cpus), k(gpus) {
  if (m < 1 || k < 1) {
    throw std::invalid_argument("platform needs at least one CPU and one GPU");
  }
}

std::vector<int> topological_order(std::span<const Task> tasks, std::span<const Edge> edges) {
  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < tasks.size(); ++i) index.emplace(tasks[i].id, i);

  std::vector<std::vector<std::size_t>> succs(tasks.size());
  std::vector<int> indegree(tasks.size(), 0);
  for (const Edge& e : edges) {
    auto from = index.find(e.from);
    auto to = index.find(e.to);
    if (from == index.end() || to == index.end()) {
      throw std::invalid_argument("edge references unknown task");
    }
    succs[from->second].push_back(to->second);
    ++indegree[to->second];
  }

  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (indegree[i] == 0) ready.push(tasks[i].id);
  }
  std::vector<int> order;
  order.reserve(tasks.size());
  while (!ready.empty()) {
    int id = ready.top();
    ready.pop();
    order.push_back(id);
    for (std::size_t s : succs[index[id]]) {
      if (--indegree[s] == 0) ready.push(tasks[s].id);
    }
  }
  if (order.size() != tasks.size()) {
    // Walk backwards through unprocessed predecessors until a task repeats.
    std::vector<std::vector<std::size_t>> preds(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (std::size_t s : succs[i]) preds[s].push_back(i);
    }
    std::size_t cur = 0;
    while (indegree[cur] == 0) ++cur;
    std::vector<bool> seen(tasks.size(), false);
    while (!seen[cur]) {
      seen[cur] = true;
      for (std::size_t p : preds[cur]) {
        if (indegree[p] > 0) {
          cur = p;
          break;
        }
      }
    }
    std::ostringstream msg;
    msg << "precedence graph has a cycle through task " << tasks[cur].id;
    throw CycleError(tasks[cur].id, msg.str());
  }
  return order;
}

Instance::Instance(std::vector<Task> tasks, std::vector<Edge> edges)
    : tasks_(std::move(tasks)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const Task& t = tasks_[i];
    if (!(t.cpu > 0) || !(t.gpu > 0) || !std::isfinite(t.cpu) || !std::isfinite(t.gpu)) {
      throw std::invalid_argument("task " + std::to_string(t.id) + " needs positive finite durations");
    }
    if (!index_.emplace(t.id, i).second) {
      throw std::invalid_argument("duplicate task id " + std::to_string(t.id));
    }
  }
  preds_.assign(tasks_.size(), {});
  succs_.assign(tasks_.size(), {});
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.from == e.to) throw std::invalid_argument("self-loop on task " + std::to_string(e.from));
    if (!contains(e.from) || !contains(e.to)) throw std::invalid_argument("edge references unknown task");
    if (!seen.emplace(e.from, e.to).second) {
      throw std::invalid_argument("duplicate edge " + std::to_string(e.from) + "->" + std::to_string(e.to));
    }
    auto from = static_cast<int>(index_.at(e.from));
    auto to = static_cast<int>(index_.at(e.to));
    succs_[from].push_back(to);
    preds_[to].push_back(from);
  }
  for (auto& list : preds_) std::sort(list.begin(), list.end());
  for (auto& list : succs_) std::sort(list.begin(), list.end());
  for (int id : topological_order(tasks_, edges_)) topo_.push_back(static_cast<int>(index_.at(id)));
}

std::size_t Instance::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown task id " + std::to_string(id));
  return it->second;
}

std::vector<int> Instance::topological_ids() const {
  std::vector<int> ids;
  ids.reserve(topo_.size());
  for (int i : topo_) ids.push_back(tasks_[i].id);
  return ids;
}

Loads loads(const Instance& instance, const Assignment& assignment) {
  Loads l;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (assignment[i] == Resource::cpu) {
      l.cpu += instance.task(i).cpu;
    } else {
      l.gpu += instance.task(i).gpu;
    }
  }
  return l;
}

Time makespan(const Schedule& schedule) {
  Time result = 0;
  for (const Placement& p : schedule.placements) result = std::max(result, p.finish);
  return result;
}

void place(Schedule& schedule, const Instance& instance, const Platform& platform, std::size_t task, int proc,
           Time start) {
  Placement& p = schedule[task];
  p.proc = proc;
  p.start = start;
  p.finish = start + instance.task(task).time_on(platform.type_of(proc));
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::missing_task: return "missing";
    case ViolationKind::bad_processor: return "bad processor";
    case ViolationKind::bad_duration: return "bad duration";
    case ViolationKind::negative_start: return "negative start";
    case ViolationKind::overlap: return "overlap";
    case ViolationKind::precedence: return "precedence";
  }
  return "unknown";
}

std::optional<Violation> validate(const Schedule& schedule, const Instance& instance, const Platform& platform) {
  auto report = [](ViolationKind kind, int id, std::string msg) {
    return std::optional<Violation>(Violation{kind, id, std::move(msg)});
  };
  if (schedule.size() != instance.size()) {
    return report(ViolationKind::missing_task, -1, "schedule size does not match instance");
  }
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Placement& p = schedule[i];
    const Task& t = instance.task(i);
    if (!p.placed()) return report(ViolationKind::missing_task, t.id, "task " + std::to_string(t.id) + " not placed");
  }
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Placement& p = schedule[i];
    const Task& t = instance.task(i);
    if (!platform.valid_processor(p.proc)) {
      return report(ViolationKind::bad_processor, t.id,
                    "task " + std::to_string(t.id) + " on processor " + std::to_string(p.proc));
    }
    if (!time_eq(p.finish - p.start, t.time_on(platform.type_of(p.proc)))) {
      return report(ViolationKind::bad_duration, t.id, "task " + std::to_string(t.id) + " has wrong duration");
    }
    if (time_lt(p.start, 0)) {
      return report(ViolationKind::negative_start, t.id, "task " + std::to_string(t.id) + " starts before 0");
    }
  }

  std::vector<std::vector<std::size_t>> per_proc(platform.size());
  for (std::size_t i = 0; i < instance.size(); ++i) per_proc[schedule[i].proc].push_back(i);
  for (auto& tasks : per_proc) {
    std::sort(tasks.begin(), tasks.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(schedule[a].start, a) < std::pair(schedule[b].start, b);
    });
    for (std::size_t j = 1; j < tasks.size(); ++j) {
      const Placement& prev = schedule[tasks[j - 1]];
      const Placement& cur = schedule[tasks[j]];
      if (time_lt(cur.start, prev.finish)) {
        int id = instance.task(tasks[j]).id;
        return report(ViolationKind::overlap, id,
                      "task " + std::to_string(id) + " overlaps task " +
                          std::to_string(instance.task(tasks[j - 1]).id) + " on processor " +
                          std::to_string(cur.proc));
      }
    }
  }

  for (const Edge& e : instance.edges()) {
    const Placement& from = schedule[instance.index_of(e.from)];
    const Placement& to = schedule[instance.index_of(e.to)];
    if (time_lt(to.start, from.finish)) {
      return report(ViolationKind::precedence, e.to,
                    "task " + std::to_string(e.to) + " starts before predecessor " + std::to_string(e.from) +
                        " completes");
    }
  }
  return std::nullopt;
}

}  // namespace hetsched
