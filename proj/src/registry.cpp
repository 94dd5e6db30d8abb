#include "hetsched/registry.hpp"

#include <stdexcept>

#include "hetsched/dag_offline.hpp"
#include "hetsched/engine.hpp"
#include "hetsched/indep_offline.hpp"
#include "hetsched/online_policies.hpp"

namespace hetsched {

const char* to_string(Category category) {
  switch (category) {
    case Category::offline_independent: return "offline_independent";
    case Category::online_independent: return "online_independent";
    case Category::offline_dag: return "offline_dag";
    case Category::online_dag: return "online_dag";
  }
  return "?";
}

namespace {

template <class Policy, class... Args>
AlgorithmFn online(Args... args) {
  return [=](const Instance& instance, const Platform& platform) {
    Policy policy(args...);
    return online_simulate(instance, platform, policy);
  };
}

AlgorithmFn hlp_variant(HlpOrder order, bool spoliation) {
  return [=](const Instance& instance, const Platform& platform) { return hlp(instance, platform, order, spoliation); };
}

}  // namespace

std::vector<AlgorithmInfo> algorithms(const RegistryOptions& options) {
  const double eps = options.epsilon;
  using C = Category;
  return {
      {"dualhp", C::offline_independent, [eps](const Instance& i, const Platform& p) { return dualhp(i, p, eps); }},
      {"dp32", C::offline_independent, [eps](const Instance& i, const Platform& p) { return dp32(i, p, eps); }},
      {"heteroprio", C::offline_independent, heteroprio},
      {"balanced_estimate", C::offline_independent, balanced_estimate},
      {"balanced_makespan", C::offline_independent, balanced_makespan},
      {"clb2c", C::offline_independent, clb2c},
      {"sorted_ect", C::offline_independent, sorted_ect},
      {"minmin", C::offline_independent, minmin},
      {"round", C::offline_independent, round_lp},
      {"lg", C::online_independent, online<LgPolicy>()},
      {"mg", C::online_independent, online<MgPolicy>()},
      {"al4", C::online_independent, online<Al4Policy>()},
      {"heft", C::offline_dag, heft},
      {"offline_ect", C::offline_dag, offline_ect},
      {"heteroprio_dag", C::offline_dag, heteroprio_dag},
      {"hlp_est", C::offline_dag, hlp_variant(HlpOrder::est, false)},
      {"hlp_ols", C::offline_dag, hlp_variant(HlpOrder::ols, false)},
      {"hlp_est_spoliation", C::offline_dag, hlp_variant(HlpOrder::est, true)},
      {"hlp_ols_spoliation", C::offline_dag, hlp_variant(HlpOrder::ols, true)},
      {"ect", C::online_dag, online<EctPolicy>()},
      {"erls", C::online_dag, online<ErlsPolicy>()},
      {"qa", C::online_dag, online<QaPolicy>()},
      {"mixed", C::online_dag, online<MixedPolicy>(options.mixed_gamma)},
  };
}

AlgorithmInfo find_algorithm(const std::string& name, const RegistryOptions& options) {
  for (AlgorithmInfo& info : algorithms(options)) {
    if (info.name == name) return info;
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

}  // namespace hetsched
