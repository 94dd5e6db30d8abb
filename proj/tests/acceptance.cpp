// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// hard criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "hetsched/bounds.hpp"
#include "hetsched/cli.hpp"
#include "hetsched/engine.hpp"
#include "hetsched/gen.hpp"
#include "hetsched/indep_offline.hpp"
#include "hetsched/online_policies.hpp"
#include "hetsched/oracle.hpp"
#include "hetsched/registry.hpp"

using namespace hetsched;

namespace {

// Pinned tolerances and budgets.
constexpr int kFuzzRuns = 10000;
constexpr double kFuzzBudget = 300;
constexpr int kBoundInstances = 500;
constexpr double kBoundRelTol = 1e-6;
constexpr double kBoundBudget = 30;
constexpr int kOracleInstances = 300;
constexpr double kOracleBudget = 600;
constexpr double kDualEps = 1e-3;
constexpr double kRatioSlack = 1e-9;
constexpr double kTightnessBudget = 10;
constexpr double kPgMinRatio = 3.8;
constexpr double kOnlineDagMinRatio = 1.9;
constexpr double kQaMinRatio = 3.5;
constexpr double kGrahamBudget = 120;
constexpr int kGrahamMaxTasks = 7;
constexpr int kGrahamMaxMachines = 3;
constexpr int kGrahamMaxDuration = 5;
constexpr int kBenchInstancesPerCell = 100;
constexpr std::size_t kBenchTasks = 300;
constexpr double kBenchBudget = 600;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  double budget_s;
  bool soft;
  std::function<Outcome()> check;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

int worker_count() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

const Platform kSmallPlatforms[] = {Platform(1, 1), Platform(2, 1), Platform(2, 2), Platform(3, 1)};

// ---------------------------------------------------------------------------

Outcome validity_fuzz() {
  auto all = algorithms();
  const KernelTable kernels = default_kernels();
  int runs = 0;
  int invalid = 0;
  std::string first_failure;
  for (std::uint64_t s = 1; runs < kFuzzRuns; ++s) {
    Platform plat(1 + static_cast<int>(s % 6), 1 + static_cast<int>(s / 6 % 3));
    Instance inst;
    RandomSpec spec{1 + s % 60, s % 3 == 0 ? 15.0 : 3.0, s % 5 == 0 ? 4.0 : 1.0, s % 2 ? 0.2 : 1.0,
                    s % 4 < 2 ? 1.0 : 0.2, s};
    switch (s % 6) {
      case 0:
      case 1: inst = gen_random(spec); break;
      case 2: inst = gen_random_dag(spec, s % 4 == 0 ? 0.05 : 0.2); break;
      case 3: {
        const TiledApp apps[] = {TiledApp::cholesky, TiledApp::lu, TiledApp::qr};
        inst = gen_tiled_dag(apps[s / 6 % 3], 2 + static_cast<int>(s / 18 % 4), kernels, s % 12 != 3);
        break;
      }
      case 4: {
        // Small integer durations to exercise ties.
        std::vector<Task> tasks;
        for (std::uint64_t j = 0; j < 1 + s % 25; ++j) {
          tasks.push_back(Task{static_cast<int>(j), 1.0 + static_cast<double>((s + j) % 3),
                               1.0 + static_cast<double>((s * 7 + j) % 2)});
        }
        inst = Instance(std::move(tasks));
        break;
      }
      default: {
        int m = 2 + static_cast<int>(s / 6 % 3);
        Witness w = s % 3 == 0   ? gen_pg_adversary(m, 1, 0.05)
                    : s % 3 == 1 ? gen_balanced_tightness(m, 0.1)
                                 : gen_qa_adversary(4, 1, 0.01, 2);
        inst = w.instance;
        plat = w.platform;
      }
    }
    for (const AlgorithmInfo& a : all) {
      if (runs == kFuzzRuns) break;
      if (!a.accepts(inst)) continue;
      ++runs;
      auto violation = validate(a.run(inst, plat), inst, plat);
      if (violation) {
        if (invalid++ == 0) first_failure = a.name + " seed " + std::to_string(s) + ": " + violation->message;
      }
    }
  }
  Outcome o;
  o.pass = invalid == 0;
  o.detail = std::to_string(runs) + " runs, " + std::to_string(invalid) + " invalid";
  if (!first_failure.empty()) o.detail += " (first: " + first_failure + ")";
  return o;
}

// ---------------------------------------------------------------------------

Outcome bound_equivalence() {
  double worst = 0;
  for (int i = 0; i < kBoundInstances; ++i) {
    std::uint64_t seed = 5000 + static_cast<std::uint64_t>(i);
    RandomSpec spec{1 + static_cast<std::size_t>(i * 7 % 300), i % 2 ? 15.0 : 2.0, i % 3 ? 1.0 : 2.5,
                    i % 4 < 2 ? 0.2 : 1.0, i % 5 < 2 ? 0.2 : 1.0, seed};
    Instance inst = gen_random(spec);
    Platform plat(1 + i % 40, 1 + i % 8);
    Time closed = area_bound_closed_form(inst, plat);
    Time lp = area_bound_lp(inst, plat);
    worst = std::max(worst, std::abs(closed - lp) / std::max(std::abs(lp), 1e-12));
  }
  return Outcome{worst <= kBoundRelTol,
                 std::to_string(kBoundInstances) + " instances, max relative gap " + fmt("%.3g", worst)};
}

// ---------------------------------------------------------------------------

struct GuaranteeCheck {
  std::string algorithm;
  bool independent_only;
  std::function<double(const Platform&)> bound;
};

Outcome oracle_suite() {
  const std::vector<GuaranteeCheck> checks = {
      {"dualhp", true, [](const Platform&) { return 2 * (1 + kDualEps); }},
      {"balanced_estimate", true, [](const Platform&) { return 2.0; }},
      {"balanced_makespan", true, [](const Platform&) { return 2.0; }},
      {"dp32", true, [](const Platform& p) { return (1.5 + 1.0 / (2 * p.k)) * (1 + kDualEps); }},
      {"heteroprio", true, [](const Platform&) { return 2 + std::sqrt(2.0); }},
      {"clb2c", true, [](const Platform&) { return 2.0; }},
      {"al4", true, [](const Platform&) { return 4.0; }},
      {"hlp_est", false, [](const Platform&) { return 6.0; }},
      {"hlp_ols", false, [](const Platform&) { return 6.0; }},
      {"qa", false,
       [](const Platform& p) {
         return 2 * std::sqrt(double(p.m) / p.k) + 1 - 1 / std::sqrt(double(p.m) * p.k);
       }},
      {"erls", false, [](const Platform& p) { return 4 * std::sqrt(double(p.m) / p.k); }},
      {"mixed", false, [](const Platform& p) { return 2 * (2 * std::sqrt(double(p.m) / p.k) + 1); }},
  };
  std::vector<AlgorithmInfo> algos;
  for (const auto& c : checks) algos.push_back(find_algorithm(c.algorithm, RegistryOptions{kDualEps, 1.0}));

  struct Cell {
    int runs = 0;
    int violations = 0;
    double worst = 0;
  };
  std::vector<std::vector<Cell>> per_instance(kOracleInstances, std::vector<Cell>(checks.size()));
  std::vector<int> clb2c_restricted(kOracleInstances, 0);
  const std::pair<double, double> means[] = {{15, 1}, {3, 2}, {1, 3}};
  parallel_for(kOracleInstances, worker_count(), [&](std::size_t i) {
    const Platform& plat = kSmallPlatforms[i % 4];
    bool dag = i % 8 >= 4;
    auto [cpu_mean, gpu_mean] = means[i / 8 % 3];
    double cv = i / 24 % 2 ? 1.0 : 0.2;
    RandomSpec spec{2 + i % 7, cpu_mean, gpu_mean, cv, cv, 9000 + i};
    Instance inst = dag ? gen_random_dag(spec, 0.3) : gen_random(spec);
    Time opt = optimal_makespan(inst, plat);
    Time max_task = 0;
    for (const Task& t : inst.tasks()) max_task = std::max({max_task, t.cpu, t.gpu});
    for (std::size_t c = 0; c < checks.size(); ++c) {
      if (checks[c].independent_only && dag) continue;
      bool restricted = checks[c].algorithm == "clb2c";
      if (restricted && time_gt(max_task, opt)) continue;
      if (restricted) clb2c_restricted[i] = 1;
      Schedule s = algos[c].run(inst, plat);
      double ratio = makespan(s) / opt;
      Cell& cell = per_instance[i][c];
      cell.runs = 1;
      cell.worst = ratio;
      if (validate(s, inst, plat) || ratio > checks[c].bound(plat) * (1 + kRatioSlack)) cell.violations = 1;
    }
  });
  int violations = 0;
  std::string detail;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    Cell total;
    for (const auto& row : per_instance) {
      total.runs += row[c].runs;
      total.violations += row[c].violations;
      total.worst = std::max(total.worst, row[c].worst);
    }
    violations += total.violations;
    detail += (c ? ", " : "") + checks[c].algorithm + " " + fmt("%.3f", total.worst);
    if (total.violations) detail += " (" + std::to_string(total.violations) + " violations)";
  }
  int restricted = std::accumulate(clb2c_restricted.begin(), clb2c_restricted.end(), 0);
  return Outcome{violations == 0, std::to_string(kOracleInstances) + " instances (clb2c sub-suite " +
                                      std::to_string(restricted) + "), " + std::to_string(violations) +
                                      " violations; worst ratios: " + detail};
}

// ---------------------------------------------------------------------------

Outcome tightness_balanced() {
  Witness w = gen_balanced_tightness(4, 0.1);
  Schedule s = balanced_estimate(w.instance, w.platform);
  bool valid = !validate(s, w.instance, w.platform) && !validate(w.reference, w.instance, w.platform);
  Time ms = makespan(s);
  Time ref = makespan(w.reference);
  return Outcome{valid && time_eq(ms, 6) && time_eq(ref, 4),
                 "BalancedEstimate " + fmt("%g", ms) + " vs constructed OPT " + fmt("%g", ref)};
}

Outcome tightness_pg() {
  Witness w = gen_pg_adversary(4, 1, 0.01);
  EctPolicy policy;
  Schedule s = online_simulate(w.instance, w.platform, policy);
  double ratio = makespan(s) / makespan(w.reference);
  return Outcome{!validate(s, w.instance, w.platform) && ratio >= kPgMinRatio,
                 "PG ratio " + fmt("%.4f", ratio) + " (need >= " + fmt("%g", kPgMinRatio) + ")"};
}

Outcome tightness_online_dag() {
  std::vector<std::unique_ptr<OnlinePolicy>> policies;
  policies.push_back(std::make_unique<EctPolicy>());
  policies.push_back(std::make_unique<ErlsPolicy>());
  policies.push_back(std::make_unique<QaPolicy>());
  policies.push_back(std::make_unique<MixedPolicy>(1.0));
  bool pass = true;
  std::string detail;
  for (auto& p : policies) {
    AdversaryRun run = run_online_dag_adversary(4, 1, 20, *p);
    const Witness& w = run.witness;
    double ratio = makespan(run.policy_schedule) / makespan(w.reference);
    bool valid = !validate(run.policy_schedule, w.instance, w.platform) && !validate(w.reference, w.instance, w.platform);
    pass = pass && valid && ratio >= kOnlineDagMinRatio;
    detail += (detail.empty() ? "" : ", ") + p->name() + " " + fmt("%.4f", ratio);
  }
  return Outcome{pass, detail + " (need >= " + fmt("%g", kOnlineDagMinRatio) + ")"};
}

Outcome tightness_qa() {
  Witness w = gen_qa_adversary(4, 1);
  QaPolicy policy;
  Schedule s = online_simulate(w.instance, w.platform, policy);
  double ratio = makespan(s) / makespan(w.reference);
  return Outcome{!validate(s, w.instance, w.platform) && ratio >= kQaMinRatio,
                 "QA ratio " + fmt("%.4f", ratio) + " (need >= " + fmt("%g", kQaMinRatio) + ")"};
}

// ---------------------------------------------------------------------------

Outcome graham() {
  long long list_checks = 0;
  long long lpt_checks = 0;
  int violations = 0;
  double worst_list = 0;
  double worst_lpt = 0;
  for (int n = 1; n <= kGrahamMaxTasks; ++n) {
    // Every duration sequence in {1..D}^n; the LPT bound is order-free.
    std::vector<int> seq(n, 1);
    while (true) {
      std::vector<Task> tasks;
      std::vector<Time> durations;
      for (int j = 0; j < n; ++j) {
        tasks.push_back(Task{j, double(seq[j]), double(seq[j])});
        durations.push_back(seq[j]);
      }
      Instance inst(tasks);
      Assignment all_cpu(n, Resource::cpu);
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      bool sorted = std::is_sorted(seq.begin(), seq.end());
      for (int m = 1; m <= kGrahamMaxMachines; ++m) {
        Platform plat(m, 1);
        Time opt = identical_machines_optimum(durations, m);
        double list_ratio = makespan(list_schedule(inst, plat, all_cpu, order)) / opt;
        worst_list = std::max(worst_list, list_ratio);
        ++list_checks;
        if (list_ratio > (2 - 1.0 / m) * (1 + kRatioSlack)) ++violations;
        if (sorted) {
          double lpt_ratio = makespan(lpt_schedule(inst, plat, all_cpu)) / opt;
          worst_lpt = std::max(worst_lpt, lpt_ratio);
          ++lpt_checks;
          if (lpt_ratio > (4.0 / 3 - 1.0 / (3 * m)) * (1 + kRatioSlack)) ++violations;
        }
      }
      int pos = n - 1;
      while (pos >= 0 && seq[pos] == kGrahamMaxDuration) seq[pos--] = 1;
      if (pos < 0) break;
      ++seq[pos];
    }
  }
  return Outcome{violations == 0, std::to_string(list_checks) + " list and " + std::to_string(lpt_checks) +
                                      " LPT checks, " + std::to_string(violations) + " violations; worst list " +
                                      fmt("%.4f", worst_list) + ", worst LPT " + fmt("%.4f", worst_lpt)};
}

// ---------------------------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

Outcome benchmark() {
  const std::vector<std::string> offline = {"dualhp",     "dp32",  "heteroprio", "balanced_estimate", "balanced_makespan",
                                            "clb2c",      "sorted_ect", "minmin", "round"};
  const std::vector<std::string> online = {"ect", "lg", "mg", "al4"};
  std::vector<std::string> names = offline;
  names.insert(names.end(), online.begin(), online.end());
  std::vector<AlgorithmInfo> algos;
  for (const auto& n : names) algos.push_back(find_algorithm(n));
  const Platform platforms[] = {Platform(10, 2), Platform(10, 8), Platform(40, 2), Platform(40, 8)};
  const std::pair<double, double> cells[] = {{0.2, 0.2}, {0.2, 1}, {1, 0.2}, {1, 1}};

  bool pass = true;
  std::string detail;
  for (std::size_t c = 0; c < 4; ++c) {
    auto [cv_cpu, cv_gpu] = cells[c];
    std::vector<std::vector<double>> ratios(algos.size(), std::vector<double>(kBenchInstancesPerCell));
    parallel_for(kBenchInstancesPerCell, worker_count(), [&](std::size_t i) {
      Instance inst = gen_random(RandomSpec{kBenchTasks, 15, 1, cv_cpu, cv_gpu, 20000 + 1000 * c + i});
      const Platform& plat = platforms[i % 4];
      Time lb = compute_bounds(inst, plat).best;
      for (std::size_t a = 0; a < algos.size(); ++a) ratios[a][i] = makespan(algos[a].run(inst, plat)) / lb;
    });
    std::map<std::string, double> med;
    for (std::size_t a = 0; a < algos.size(); ++a) med[names[a]] = median(ratios[a]);
    double balmks = med["balanced_makespan"];
    double best_offline = balmks;
    std::string beaten;
    for (const auto& n : offline) {
      best_offline = std::min(best_offline, med[n]);
      if (med[n] < balmks - kRatioSlack) beaten += " " + n;
    }
    std::string below;
    for (const auto& n : online) {
      if (med[n] < best_offline - kRatioSlack) below += " " + n;
    }
    pass = pass && beaten.empty() && below.empty();
    detail += (c ? "; " : "") + std::string("cv ") + fmt("%g", cv_cpu) + "/" + fmt("%g", cv_gpu) + ": BalMks " +
              fmt("%.4f", balmks) + ", best other off-line " + fmt("%.4f", [&] {
                double b = 1e300;
                for (const auto& n : offline) {
                  if (n != "balanced_makespan") b = std::min(b, med[n]);
                }
                return b;
              }()) +
              ", best on-line " + fmt("%.4f", [&] {
                double b = 1e300;
                for (const auto& n : online) b = std::min(b, med[n]);
                return b;
              }());
    if (!beaten.empty()) detail += " [beaten by" + beaten + "]";
    if (!below.empty()) detail += " [on-line below best off-line:" + below + "]";
  }
  return Outcome{pass, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1", "validity fuzz", kFuzzBudget, false, validity_fuzz},
      {"2", "area bound closed form vs LP", kBoundBudget, false, bound_equivalence},
      {"3", "oracle guarantee suite", kOracleBudget, false, oracle_suite},
      {"4a", "tightness: BalancedEstimate m=4 eps=0.1", kTightnessBudget, false, tightness_balanced},
      {"4b", "tightness: PG adversary (4,1,0.01)", kTightnessBudget, false, tightness_pg},
      {"4c", "tightness: on-line DAG adversary (4,1,20)", kTightnessBudget, false, tightness_online_dag},
      {"4d", "tightness: QA adversary (4,1)", kTightnessBudget, false, tightness_qa},
      {"5", "Graham homogeneous bounds", kGrahamBudget, false, graham},
      {"6", "random benchmark medians (soft)", kBenchBudget, true, benchmark},
  };
  int hard_failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = elapsed <= c.budget_s;
    bool pass = o.pass && in_time;
    if (!pass && !c.soft) ++hard_failures;
    std::printf("%s [%s] %s: %s; %.1f s (budget %.0f s%s)\n", pass ? "PASS" : (c.soft ? "SOFT-FAIL" : "FAIL"),
                c.id.c_str(), c.name.c_str(), o.detail.c_str(), elapsed, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return hard_failures == 0 ? 0 : 1;
}
