#pragma once

#include "hetsched/model.hpp"

namespace hetsched::fixtures {

// Two tasks that each prefer a different side; optimal makespan 1.
inline Instance fix1() { return Instance({Task{0, 2, 1}, Task{1, 1, 2}}); }
inline Platform fix1_platform() { return Platform(1, 1); }

// Homogeneous tasks 1, 1, 2 on a 2+2 platform.
inline Instance fix3() { return Instance({Task{0, 1, 1}, Task{1, 1, 1}, Task{2, 2, 2}}); }
inline Platform fix3_platform() { return Platform(2, 2); }

// A single task that is much faster on the lone GPU.
inline Instance fix4() { return Instance({Task{0, 4, 1.1}}); }
inline Platform fix4_platform() { return Platform(4, 1); }

inline Instance chain(std::vector<Task> tasks) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < tasks.size(); ++i) edges.push_back(Edge{tasks[i - 1].id, tasks[i].id});
  return Instance(std::move(tasks), std::move(edges));
}

}  // namespace hetsched::fixtures
