#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hetsched/model.hpp"

namespace hetsched {

enum class Category { offline_independent, online_independent, offline_dag, online_dag };
const char* to_string(Category category);

using AlgorithmFn = std::function<Schedule(const Instance&, const Platform&)>;

struct AlgorithmInfo {
  std::string name;
  Category category;
  AlgorithmFn run;

  bool online() const { return category == Category::online_independent || category == Category::online_dag; }
  /// DAG algorithms also accept independent instances; the others reject edges.
  bool accepts(const Instance& instance) const {
    return instance.independent() || category == Category::offline_dag || category == Category::online_dag;
  }
};

struct RegistryOptions {
  double epsilon = 1e-3;
  double mixed_gamma = 1;
};

/// Every implemented algorithm in a fixed order. On-line policies run
/// through online_simulate with a fresh policy per call.
std::vector<AlgorithmInfo> algorithms(const RegistryOptions& options = {});

/// Throws std::invalid_argument for unknown names.
AlgorithmInfo find_algorithm(const std::string& name, const RegistryOptions& options = {});

}  // namespace hetsched
