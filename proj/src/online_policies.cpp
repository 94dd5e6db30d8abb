#include "hetsched/online_policies.hpp"

#include <cmath>

namespace hetsched {

namespace {

int two_rule_choice(const Task& task, Time arrival, const OnlineView& view, double cpu_weight, double gpu_weight) {
  Time wait = gpu_wait(arrival, view.machines);
  Resource side;
  if (time_ge(task.cpu, wait + task.gpu)) {
    side = Resource::gpu;
  } else if (time_le(task.cpu / cpu_weight, task.gpu / gpu_weight)) {
    side = Resource::cpu;
  } else {
    side = Resource::gpu;
  }
  return list_processor(side, arrival, view.machines);
}

}  // namespace

int EctPolicy::choose(const Task& task, Time arrival, const OnlineView& view) {
  return ect_processor(task, arrival, view.machines);
}

int LgPolicy::choose(const Task& task, Time arrival, const OnlineView& view) {
  const Platform& p = view.platform;
  Resource side = time_ge(task.cpu / p.m, task.gpu / p.k) ? Resource::gpu : Resource::cpu;
  return list_processor(side, arrival, view.machines);
}

int MgPolicy::choose(const Task& task, Time arrival, const OnlineView& view) {
  const Platform& p = view.platform;
  Resource side;
  if (time_ge(task.cpu / p.m, task.gpu / p.k)) {
    side = Resource::gpu;
  } else {
    Time max_with = std::max(r_max_, task.gpu);
    Time sum_with = r_sum_ + task.gpu;
    if (time_ge(task.cpu, std::max(max_with, sum_with / p.k))) {
      side = Resource::gpu;
      r_max_ = max_with;
      r_sum_ = sum_with;
      ++r_size_;
    } else {
      side = Resource::cpu;
    }
  }
  return list_processor(side, arrival, view.machines);
}

int Al4Policy::choose(const Task& task, Time arrival, const OnlineView& view) {
  return two_rule_choice(task, arrival, view, view.platform.m, view.platform.k);
}

int ErlsPolicy::choose(const Task& task, Time arrival, const OnlineView& view) {
  return two_rule_choice(task, arrival, view, std::sqrt(static_cast<double>(view.platform.m)),
                         std::sqrt(static_cast<double>(view.platform.k)));
}

Resource qa_side(const Task& task, const Platform& platform) {
  double threshold = std::sqrt(static_cast<double>(platform.m) / platform.k);
  return time_le(task.cpu, threshold * task.gpu) ? Resource::cpu : Resource::gpu;
}

int QaPolicy::choose(const Task& task, Time arrival, const OnlineView& view) {
  return list_processor(qa_side(task, view.platform), arrival, view.machines);
}

int MixedPolicy::choose(const Task& task, Time arrival, const OnlineView& view) {
  if (stay_ect_) {
    int proc = ect_processor(task, arrival, view.machines);
    Time finish = std::max(arrival, view.machines.available(proc)) + task.time_on(view.platform.type_of(proc));
    Time c_ect = std::max(view.makespan, finish);
    // QA replayed from time zero on everything revealed so far, this task included.
    Instance known(std::vector<Task>(view.revealed.begin(), view.revealed.end()),
                   std::vector<Edge>(view.revealed_edges.begin(), view.revealed_edges.end()));
    QaPolicy qa;
    Time c_qa = makespan(online_simulate(known, view.platform, qa));
    stay_ect_ = time_le(c_ect, gamma_ * c_qa);
    if (stay_ect_) {
      ++ect_decisions_;
      return proc;
    }
  }
  return list_processor(qa_side(task, view.platform), arrival, view.machines);
}

}  // namespace hetsched
