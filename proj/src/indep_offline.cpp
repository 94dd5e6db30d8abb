#include "hetsched/indep_offline.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

#include "hetsched/bounds.hpp"
#include "hetsched/engine.hpp"

namespace hetsched {

namespace {

void require_independent(const Instance& instance) {
  if (!instance.independent()) throw std::invalid_argument("algorithm requires independent tasks");
}

/// Task indices by nondecreasing acceleration, ties by ascending id.
std::vector<int> by_acceleration(const Instance& instance) {
  std::vector<int> order(instance.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double aa = instance.task(a).acceleration();
    double ab = instance.task(b).acceleration();
    if (aa != ab) return aa < ab;
    return instance.task(a).id < instance.task(b).id;
  });
  return order;
}

std::vector<int> ids_of(const Instance& instance, const std::vector<int>& indices) {
  std::vector<int> ids;
  ids.reserve(indices.size());
  for (int i : indices) ids.push_back(instance.task(i).id);
  return ids;
}

}  // namespace

DualSearchResult dual_search(const GuessFn& guess, const DualSearchConfig& config, const Schedule& fallback) {
  if (!(config.epsilon > 0)) throw std::invalid_argument("dual search precision must be positive");
  if (time_gt(config.lower, config.upper)) throw std::invalid_argument("dual search lower bound above upper bound");
  DualSearchResult result;
  std::optional<Schedule> best;
  Time lo = config.lower;
  Time hi = config.upper;
  while (hi - lo > config.epsilon * lo) {
    Time mid = (lo + hi) / 2;
    ++result.iterations;
    if (auto s = guess(mid)) {
      best = std::move(s);
      result.lambda = mid;
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (!best) {
    ++result.iterations;
    if (auto s = guess(config.upper)) {
      best = std::move(s);
      result.lambda = config.upper;
    }
  }
  if (best) {
    result.schedule = std::move(*best);
  } else {
    result.schedule = fallback;
    result.lambda = config.upper;
    result.fallback = true;
  }
  return result;
}

DualSearchConfig default_dual_config(const Instance& instance, const Platform& platform) {
  DualSearchConfig config;
  config.lower = std::max(trivial_bound(instance), area_bound_closed_form(instance, platform));
  config.upper = std::max(config.lower, makespan(sorted_ect(instance, platform)));
  return config;
}

namespace {

Schedule run_dual(const Instance& instance, const Platform& platform, double epsilon,
                  std::optional<Schedule> (*inner)(const Instance&, const Platform&, Time)) {
  require_independent(instance);
  if (instance.empty()) return Schedule();
  DualSearchConfig config = default_dual_config(instance, platform);
  config.epsilon = epsilon;
  Schedule fallback = sorted_ect(instance, platform);
  return dual_search([&](Time lambda) { return inner(instance, platform, lambda); }, config, fallback).schedule;
}

}  // namespace

std::optional<Schedule> dualhp_guess(const Instance& instance, const Platform& platform, Time lambda) {
  require_independent(instance);
  const std::size_t n = instance.size();
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double aa = instance.task(a).acceleration();
    double ab = instance.task(b).acceleration();
    if (aa != ab) return aa > ab;
    return instance.task(a).id < instance.task(b).id;
  });

  Assignment x(n, Resource::cpu);
  std::vector<bool> fixed(n, false);
  Time w_cpu = 0;
  Time w_gpu = 0;
  for (int j : order) {
    const Task& t = instance.task(j);
    if (time_gt(t.cpu, lambda)) {
      if (time_gt(t.gpu, lambda)) return std::nullopt;
      x[j] = Resource::gpu;
      w_gpu += t.gpu;
      fixed[j] = true;
    } else if (time_gt(t.gpu, lambda)) {
      x[j] = Resource::cpu;
      w_cpu += t.cpu;
      fixed[j] = true;
    }
  }
  const Time k_lambda = platform.k * lambda;
  for (int j : order) {
    if (fixed[j]) continue;
    const Task& t = instance.task(j);
    if (time_lt(w_gpu, k_lambda)) {
      x[j] = Resource::gpu;
      w_gpu += t.gpu;
    } else {
      x[j] = Resource::cpu;
      w_cpu += t.cpu;
    }
  }
  if (time_gt(w_cpu, platform.m * lambda) || time_gt(w_gpu, (platform.k + 1) * lambda)) return std::nullopt;
  return list_schedule(instance, platform, x, ids_of(instance, order));
}

Schedule dualhp(const Instance& instance, const Platform& platform, double epsilon) {
  return run_dual(instance, platform, epsilon, &dualhp_guess);
}

std::optional<Schedule> dp32_guess(const Instance& instance, const Platform& platform, Time lambda) {
  require_independent(instance);
  const std::size_t n = instance.size();
  const int m = platform.m;
  const int k = platform.k;
  if (static_cast<double>(n) * static_cast<double>(n) * k * m > kDpStateLimit) {
    throw std::length_error("instance too large for DP");
  }
  if (n == 0) return Schedule();
  if (!(lambda > 0)) return std::nullopt;

  // Per task: allowed sides, shelf membership, discretized GPU time.
  const Time half = lambda / 2;
  const double unit = lambda / (2.0 * static_cast<double>(n));
  std::vector<bool> may_cpu(n);
  std::vector<bool> may_gpu(n);
  std::vector<bool> big_cpu(n);
  std::vector<bool> big_gpu(n);
  std::vector<int> units(n);
  int max_mu = 0;
  int max_kappa = 0;
  long long total_units = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Task& t = instance.task(j);
    may_cpu[j] = time_le(t.cpu, lambda);
    may_gpu[j] = time_le(t.gpu, lambda);
    if (!may_cpu[j] && !may_gpu[j]) return std::nullopt;
    big_cpu[j] = time_gt(t.cpu, half);
    big_gpu[j] = time_gt(t.gpu, half);
    // The slack keeps a task of exactly lambda/2n at one unit.
    units[j] = static_cast<int>(std::floor(t.gpu / unit + kTimeTolerance));
    if (may_cpu[j] && big_cpu[j]) ++max_mu;
    if (may_gpu[j] && big_gpu[j]) ++max_kappa;
    if (may_gpu[j]) total_units += units[j];
  }
  const int mu_dim = std::min(m, max_mu) + 1;
  const int kappa_dim = std::min(k, max_kappa) + 1;
  const int n_dim = static_cast<int>(std::min<long long>(2LL * static_cast<long long>(n) * k, total_units)) + 1;
  const std::size_t states = static_cast<std::size_t>(mu_dim) * kappa_dim * n_dim;
  auto state = [&](int mu, int kappa, int slots) {
    return (static_cast<std::size_t>(mu) * kappa_dim + kappa) * n_dim + slots;
  };

  constexpr double kUnreached = std::numeric_limits<double>::infinity();
  std::vector<double> cur(states, kUnreached);
  std::vector<double> next(states);
  // Bit set per layer: 1 when the task went to the CPU side.
  std::vector<std::uint64_t> choice((states * n + 63) / 64, 0);
  auto set_choice = [&](std::size_t layer, std::size_t s) {
    std::size_t bit = layer * states + s;
    choice[bit / 64] |= std::uint64_t{1} << (bit % 64);
  };
  auto clear_choice = [&](std::size_t layer, std::size_t s) {
    std::size_t bit = layer * states + s;
    choice[bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
  };
  auto get_choice = [&](std::size_t layer, std::size_t s) {
    std::size_t bit = layer * states + s;
    return (choice[bit / 64] >> (bit % 64)) & 1U;
  };

  cur[state(0, 0, 0)] = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(next.begin(), next.end(), kUnreached);
    const Task& t = instance.task(j);
    const int dmu = big_cpu[j] ? 1 : 0;
    const int dkappa = big_gpu[j] ? 1 : 0;
    const int du = units[j];
    for (int mu = 0; mu < mu_dim; ++mu) {
      for (int kappa = 0; kappa < kappa_dim; ++kappa) {
        for (int slots = 0; slots < n_dim; ++slots) {
          double load = cur[state(mu, kappa, slots)];
          if (load == kUnreached) continue;
          if (may_gpu[j] && kappa + dkappa < kappa_dim && slots + du < n_dim) {
            std::size_t s = state(mu, kappa + dkappa, slots + du);
            if (load < next[s]) {
              next[s] = load;
              clear_choice(j, s);
            }
          }
          if (may_cpu[j] && mu + dmu < mu_dim) {
            std::size_t s = state(mu + dmu, kappa, slots);
            double value = load + t.cpu;
            if (value < next[s]) {
              next[s] = value;
              set_choice(j, s);
            }
          }
        }
      }
    }
    std::swap(cur, next);
  }

  std::size_t best_state = states;
  for (std::size_t s = 0; s < states; ++s) {
    if (cur[s] == kUnreached || time_gt(cur[s], m * lambda)) continue;
    if (best_state == states || cur[s] < cur[best_state]) best_state = s;
  }
  if (best_state == states) return std::nullopt;

  Assignment x(n, Resource::gpu);
  std::size_t s = best_state;
  for (std::size_t j = n; j-- > 0;) {
    int slots = static_cast<int>(s % n_dim);
    int kappa = static_cast<int>((s / n_dim) % kappa_dim);
    int mu = static_cast<int>(s / n_dim / kappa_dim);
    if (get_choice(j, s)) {
      x[j] = Resource::cpu;
      s = state(mu - (big_cpu[j] ? 1 : 0), kappa, slots);
    } else {
      x[j] = Resource::gpu;
      s = state(mu, kappa - (big_gpu[j] ? 1 : 0), slots - units[j]);
    }
  }
  // Tasks above lambda/2 sort first under LPT, so each side gets its big
  // shelf one task per processor at time 0, then the small shelf greedily.
  return lpt_schedule(instance, platform, x);
}

Schedule dp32(const Instance& instance, const Platform& platform, double epsilon) {
  return run_dual(instance, platform, epsilon, &dp32_guess);
}

Schedule heteroprio(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  const std::size_t n = instance.size();
  std::vector<PoolKey> cpu_keys(n);
  std::vector<PoolKey> gpu_keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Task& t = instance.task(i);
    int task = static_cast<int>(i);
    cpu_keys[i] = PoolKey{t.acceleration(), 0, t.id, task};
    gpu_keys[i] = PoolKey{-t.acceleration(), 0, -t.id, task};
  }
  SharedPool pool(std::move(cpu_keys), std::move(gpu_keys));
  SpoliationRule rule;
  return simulate(instance, platform, pool, &rule);
}

Time allocation_estimate(const Instance& instance, const Platform& platform, const Assignment& x) {
  Time w_cpu = 0;
  Time w_gpu = 0;
  Time m_cpu = 0;
  Time m_gpu = 0;
  for (std::size_t j = 0; j < instance.size(); ++j) {
    const Task& t = instance.task(j);
    if (x[j] == Resource::cpu) {
      w_cpu += t.cpu;
      m_cpu = std::max(m_cpu, t.cpu);
    } else {
      w_gpu += t.gpu;
      m_gpu = std::max(m_gpu, t.gpu);
    }
  }
  return std::max({w_cpu / platform.m, w_gpu / platform.k, m_cpu, m_gpu});
}

Time lpt_makespan(const Instance& instance, const Platform& platform, const Assignment& x) {
  Time result = 0;
  std::vector<Time> durations;
  for (Resource side : {Resource::cpu, Resource::gpu}) {
    durations.clear();
    for (std::size_t j = 0; j < instance.size(); ++j) {
      if (x[j] == side) durations.push_back(instance.task(j).time_on(side));
    }
    std::sort(durations.begin(), durations.end(), std::greater<>());
    std::priority_queue<Time, std::vector<Time>, std::greater<>> free_at;
    for (int p = 0; p < platform.count(side); ++p) free_at.push(0.0);
    for (Time d : durations) {
      Time start = free_at.top();
      free_at.pop();
      free_at.push(start + d);
      result = std::max(result, start + d);
    }
  }
  return result;
}

namespace {

/// Shared skeleton of the balanced allocation loops. The processor types
/// are relabeled so that side1 is the less loaded one after the favorite
/// side initialization; tasks then move one at a time from side0 to side1.
class BalancedWalk {
 public:
  BalancedWalk(const Instance& instance, const Platform& platform) : instance_(instance), platform_(platform) {
    const std::size_t n = instance.size();
    x_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      x_[j] = instance.task(j).acceleration() < 1 ? Resource::cpu : Resource::gpu;
    }
    Loads l = loads(instance, x_);
    side1_ = l.cpu / platform.m > l.gpu / platform.k ? Resource::gpu : Resource::cpu;
    order_.resize(n);
    for (std::size_t j = 0; j < n; ++j) order_[j] = static_cast<int>(j);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      double aa = alpha(a);
      double ab = alpha(b);
      if (aa != ab) return aa < ab;
      return instance.task(a).id < instance.task(b).id;
    });
    w1_ = side1_ == Resource::cpu ? l.cpu : l.gpu;
    w0_ = side1_ == Resource::cpu ? l.gpu : l.cpu;
  }

  const Assignment& x() const { return x_; }
  const std::vector<int>& order() const { return order_; }
  Resource side1() const { return side1_; }
  int count1() const { return platform_.count(side1_); }
  int count0() const { return platform_.count(other(side1_)); }
  Time w1() const { return w1_; }
  Time w0() const { return w0_; }
  Time p1(int j) const { return instance_.task(j).time_on(side1_); }
  Time p0(int j) const { return instance_.task(j).time_on(other(side1_)); }
  /// Acceleration in the relabeled frame: side1 time over side0 time.
  double alpha(int j) const { return p1(j) / p0(j); }
  bool on1(int j) const { return x_[j] == side1_; }

  /// Position in order() of the first task on side0, or n.
  std::size_t start() const {
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
      if (!on1(order_[pos])) return pos;
    }
    return order_.size();
  }

  void move_to1(int j) {
    x_[j] = side1_;
    w1_ += p1(j);
    w0_ -= p0(j);
  }
  void move_to0(int j) {
    x_[j] = other(side1_);
    w1_ -= p1(j);
    w0_ += p0(j);
  }

  /// Largest side1 task among those on side1 that are faster on side0
  /// (ties: lowest id); -1 when none.
  int jmax() const {
    int best = -1;
    for (int j : order_) {
      if (!on1(j) || !(alpha(j) > 1)) continue;
      if (best < 0 || p1(j) > p1(best) ||
          (p1(j) == p1(best) && instance_.task(j).id < instance_.task(best).id)) {
        best = j;
      }
    }
    return best;
  }

  /// Rolls back the dominating task, if any. Returns true when it did.
  bool rollback_dominating() {
    int j = jmax();
    if (j < 0) return false;
    if (!time_eq(allocation_estimate(instance_, platform_, x_), p1(j))) return false;
    move_to0(j);
    return true;
  }

 private:
  const Instance& instance_;
  const Platform& platform_;
  Assignment x_;
  Resource side1_;
  std::vector<int> order_;
  Time w1_ = 0;
  Time w0_ = 0;
};

}  // namespace

BalancedAllocation balanced_allocation(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  if (instance.empty()) throw std::invalid_argument("balanced allocation needs at least one task");
  BalancedWalk walk(instance, platform);
  Assignment best = walk.x();
  Time best_est = allocation_estimate(instance, platform, best);
  std::optional<Assignment> inversion;
  const auto& order = walk.order();
  for (std::size_t pos = walk.start(); pos < order.size(); ++pos) {
    int j = order[pos];
    Time load1 = walk.w1() / walk.count1();
    Time load0 = walk.w0() / walk.count0();
    if (time_le(load1, load0) &&
        time_gt((walk.w1() + walk.p1(j)) / walk.count1(), (walk.w0() - walk.p0(j)) / walk.count0())) {
      inversion = walk.x();
    }
    walk.move_to1(j);
    Time est = allocation_estimate(instance, platform, walk.x());
    if (time_lt(est, best_est)) {
      best = walk.x();
      best_est = est;
    }
    walk.rollback_dominating();
  }
  if (!inversion) inversion = walk.x();
  return BalancedAllocation{std::move(best), std::move(*inversion)};
}

Schedule balanced_estimate(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  if (instance.empty()) return Schedule();
  BalancedAllocation alloc = balanced_allocation(instance, platform);
  Schedule a = lpt_schedule(instance, platform, alloc.best);
  Schedule b = lpt_schedule(instance, platform, alloc.inversion);
  return time_le(makespan(a), makespan(b)) ? a : b;
}

Schedule balanced_makespan(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  if (instance.empty()) return Schedule();
  BalancedWalk walk(instance, platform);
  Assignment best = walk.x();
  Time best_lpt = lpt_makespan(instance, platform, best);
  auto consider = [&] {
    Time value = lpt_makespan(instance, platform, walk.x());
    if (time_lt(value, best_lpt)) {
      best = walk.x();
      best_lpt = value;
    }
  };
  const auto& order = walk.order();
  for (std::size_t pos = walk.start(); pos < order.size(); ++pos) {
    walk.move_to1(order[pos]);
    consider();
    if (walk.rollback_dominating()) consider();
  }
  return lpt_schedule(instance, platform, best);
}

Schedule clb2c(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  const std::size_t n = instance.size();
  Schedule schedule(n);
  if (n == 0) return schedule;
  std::vector<int> order = by_acceleration(instance);
  std::vector<Time> completion(platform.size(), 0.0);
  auto least_loaded = [&](Resource type) {
    int first = platform.first(type);
    int best = first;
    for (int p = first + 1; p < first + platform.count(type); ++p) {
      if (time_lt(completion[p], completion[best])) best = p;
    }
    return best;
  };
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  std::size_t remaining = n;
  while (remaining > 0) {
    int cpu = least_loaded(Resource::cpu);
    int gpu = least_loaded(Resource::gpu);
    const Task& head = instance.task(order[lo]);
    const Task& tail = instance.task(order[hi]);
    if (time_le(completion[cpu] + head.cpu, completion[gpu] + tail.gpu)) {
      place(schedule, instance, platform, order[lo], cpu, completion[cpu]);
      completion[cpu] = schedule[order[lo]].finish;
      ++lo;
    } else {
      place(schedule, instance, platform, order[hi], gpu, completion[gpu]);
      completion[gpu] = schedule[order[hi]].finish;
      if (hi > 0) --hi;
    }
    --remaining;
  }
  return schedule;
}

Schedule sorted_ect(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  const std::size_t n = instance.size();
  std::vector<int> order(n);
  std::vector<double> weight(n);
  for (std::size_t j = 0; j < n; ++j) {
    order[j] = static_cast<int>(j);
    const Task& t = instance.task(j);
    weight[j] = (platform.m * t.cpu + platform.k * t.gpu) / platform.size();
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return instance.task(a).id < instance.task(b).id;
  });
  Schedule schedule(n);
  MachineState machines(platform);
  for (int j : order) {
    int proc = ect_processor(instance.task(j), 0, machines);
    place(schedule, instance, platform, j, proc, machines.available(proc));
    machines.occupy(proc, j, schedule[j].start, schedule[j].finish);
  }
  return schedule;
}

Schedule minmin(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  const std::size_t n = instance.size();
  Schedule schedule(n);
  MachineState machines(platform);
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    const Time cpu_free = machines.earliest_free(Resource::cpu);
    const Time gpu_free = machines.earliest_free(Resource::gpu);
    int pick = -1;
    Time pick_finish = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (done[j]) continue;
      const Task& t = instance.task(j);
      Time finish = std::min(cpu_free + t.cpu, gpu_free + t.gpu);
      if (pick < 0 || time_lt(finish, pick_finish) ||
          (time_eq(finish, pick_finish) && t.id < instance.task(pick).id)) {
        pick = static_cast<int>(j);
        pick_finish = finish;
      }
    }
    int proc = ect_processor(instance.task(pick), 0, machines);
    place(schedule, instance, platform, pick, proc, machines.available(proc));
    machines.occupy(proc, pick, schedule[pick].start, schedule[pick].finish);
    done[pick] = true;
  }
  return schedule;
}

Schedule round_lp(const Instance& instance, const Platform& platform) {
  require_independent(instance);
  if (instance.empty()) return Schedule();
  std::vector<double> share = area_fractions(instance, platform);
  Assignment x(instance.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = share[j] >= 0.5 - kTimeTolerance ? Resource::cpu : Resource::gpu;
  return lpt_schedule(instance, platform, x);
}

}  // namespace hetsched
