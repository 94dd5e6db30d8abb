#include "hetsched/bounds.hpp"

#include <algorithm>
#include <numeric>

namespace hetsched {

namespace {

std::vector<std::size_t> by_acceleration(const Instance& instance) {
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double aa = instance.task(a).acceleration();
    double ab = instance.task(b).acceleration();
    if (aa != ab) return aa < ab;
    return instance.task(a).id < instance.task(b).id;
  });
  return order;
}

struct Pivot {
  std::size_t position = 0;
  double cpu_before = 0;
  double gpu_after = 0;
};

Pivot find_pivot(const Instance& instance, const Platform& platform, const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  std::vector<double> gpu_suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) gpu_suffix[i] = gpu_suffix[i + 1] + instance.task(order[i]).gpu;
  double cpu_prefix = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double with_i = cpu_prefix + instance.task(order[i]).cpu;
    if (with_i / platform.m >= gpu_suffix[i + 1] / platform.k) return Pivot{i, cpu_prefix, gpu_suffix[i + 1]};
    cpu_prefix = with_i;
  }
  return Pivot{n - 1, cpu_prefix - instance.task(order[n - 1]).cpu, 0};
}

}  // namespace

Time trivial_bound(const Instance& instance) {
  Time best = 0;
  for (const Task& t : instance.tasks()) best = std::max(best, t.min_time());
  return best;
}

Time area_bound_closed_form(const Instance& instance, const Platform& platform) {
  if (instance.empty()) return 0;
  auto order = by_acceleration(instance);
  Pivot p = find_pivot(instance, platform, order);
  const Task& t = instance.task(order[p.position]);
  return (t.gpu * p.cpu_before + t.cpu * p.gpu_after + t.cpu * t.gpu) / (platform.k * t.cpu + platform.m * t.gpu);
}

std::vector<double> area_fractions(const Instance& instance, const Platform& platform) {
  std::vector<double> x(instance.size(), 0.0);
  if (instance.empty()) return x;
  auto order = by_acceleration(instance);
  Pivot p = find_pivot(instance, platform, order);
  for (std::size_t i = 0; i < p.position; ++i) x[order[i]] = 1.0;
  const Task& t = instance.task(order[p.position]);
  double share = (platform.m * p.gpu_after + platform.m * t.gpu - platform.k * p.cpu_before) /
                 (platform.k * t.cpu + platform.m * t.gpu);
  x[order[p.position]] = std::clamp(share, 0.0, 1.0);
  return x;
}

LinearProgram area_program(const Instance& instance, const Platform& platform) {
  LinearProgram lp;
  const std::size_t n = instance.size();
  for (std::size_t j = 0; j < n; ++j) lp.add_variable("x" + std::to_string(instance.task(j).id), 0, 1);
  int c = lp.add_variable("C", 0, kInfinity, 1);
  std::vector<LinearTerm> cpu;
  std::vector<LinearTerm> gpu;
  double gpu_total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    cpu.push_back(LinearTerm{static_cast<int>(j), instance.task(j).cpu});
    gpu.push_back(LinearTerm{static_cast<int>(j), -instance.task(j).gpu});
    gpu_total += instance.task(j).gpu;
  }
  cpu.push_back(LinearTerm{c, -static_cast<double>(platform.m)});
  gpu.push_back(LinearTerm{c, -static_cast<double>(platform.k)});
  lp.add_constraint(std::move(cpu), Sense::le, 0, "cpu_area");
  lp.add_constraint(std::move(gpu), Sense::le, -gpu_total, "gpu_area");
  return lp;
}

Time area_bound_lp(const Instance& instance, const Platform& platform) {
  if (instance.empty()) return 0;
  return solve_or_throw(area_program(instance, platform)).objective;
}

LinearProgram lp_prec_program(const Instance& instance, const Platform& platform) {
  LinearProgram lp = area_program(instance, platform);
  const std::size_t n = instance.size();
  const int makespan = static_cast<int>(n);
  std::vector<int> completion(n);
  for (std::size_t j = 0; j < n; ++j) {
    completion[j] = lp.add_variable("C" + std::to_string(instance.task(j).id), 0, kInfinity);
  }
  auto x = [](std::size_t j) { return static_cast<int>(j); };
  // Duration of j is p̲_j + (p̄_j - p̲_j) x_j.
  for (std::size_t j = 0; j < n; ++j) {
    const Task& t = instance.task(j);
    std::string id = std::to_string(t.id);
    if (instance.preds(j).empty()) {
      lp.add_constraint({LinearTerm{x(j), t.cpu - t.gpu}, LinearTerm{completion[j], -1}}, Sense::le, -t.gpu,
                        "start_" + id);
    }
    for (int p : instance.preds(j)) {
      lp.add_constraint({LinearTerm{completion[p], 1}, LinearTerm{x(j), t.cpu - t.gpu},
                         LinearTerm{completion[j], -1}},
                        Sense::le, -t.gpu, "prec_" + std::to_string(instance.task(p).id) + "_" + id);
    }
    if (instance.succs(j).empty()) {
      lp.add_constraint({LinearTerm{completion[j], 1}, LinearTerm{makespan, -1}}, Sense::le, 0, "end_" + id);
    }
  }
  return lp;
}

LpPrecSolution lp_prec_bound(const Instance& instance, const Platform& platform) {
  LpPrecSolution sol;
  if (instance.empty()) return sol;
  const std::size_t n = instance.size();
  LpResult r = solve_or_throw(lp_prec_program(instance, platform));
  sol.value = r.values[n];
  sol.x.assign(r.values.begin(), r.values.begin() + n);
  sol.completion.assign(r.values.begin() + n + 1, r.values.end());
  for (double& v : sol.x) v = std::clamp(v, 0.0, 1.0);
  return sol;
}

Time critical_path_bound(const Instance& instance) {
  std::vector<Time> finish(instance.size(), 0.0);
  Time best = 0;
  for (int j : instance.topological_indices()) {
    Time start = 0;
    for (int p : instance.preds(j)) start = std::max(start, finish[p]);
    finish[j] = start + instance.task(j).min_time();
    best = std::max(best, finish[j]);
  }
  return best;
}

BoundReport compute_bounds(const Instance& instance, const Platform& platform, std::size_t lp_prec_limit) {
  BoundReport report;
  report.trivial = trivial_bound(instance);
  report.area = area_bound_closed_form(instance, platform);
  report.critical_path = critical_path_bound(instance);
  report.best = std::max({report.trivial, report.area, report.critical_path});
  if (!instance.independent() && instance.size() <= lp_prec_limit) {
    report.lp_prec = lp_prec_bound(instance, platform).value;
    report.best = std::max(report.best, *report.lp_prec);
  }
  return report;
}

}  // namespace hetsched
