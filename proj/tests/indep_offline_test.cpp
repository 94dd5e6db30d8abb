#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <string>

#include "fixtures.hpp"
#include "hetsched/bounds.hpp"
#include "hetsched/engine.hpp"
#include "hetsched/gen.hpp"
#include "hetsched/indep_offline.hpp"

using namespace hetsched;

namespace {

using Algo = std::function<Schedule(const Instance&, const Platform&)>;

struct Named {
  const char* name;
  Algo run;
};

std::vector<Named> all_algorithms() {
  return {
      {"dualhp", [](const Instance& i, const Platform& p) { return dualhp(i, p); }},
      {"dp32", [](const Instance& i, const Platform& p) { return dp32(i, p); }},
      {"heteroprio", heteroprio},
      {"balanced_estimate", balanced_estimate},
      {"balanced_makespan", balanced_makespan},
      {"clb2c", clb2c},
      {"sorted_ect", sorted_ect},
      {"minmin", minmin},
      {"round_lp", round_lp},
  };
}

Time checked_makespan(const Schedule& s, const Instance& inst, const Platform& plat) {
  auto v = validate(s, inst, plat);
  EXPECT_FALSE(v.has_value()) << (v ? v->message : "");
  return makespan(s);
}

std::vector<Task> identical(int n, Time cpu, Time gpu) {
  std::vector<Task> tasks;
  for (int i = 0; i < n; ++i) tasks.push_back(Task{i, cpu, gpu});
  return tasks;
}

}  // namespace

TEST(IndepOffline, EveryAlgorithmSolvesFix1Optimally) {
  auto inst = fixtures::fix1();
  for (const auto& a : all_algorithms()) {
    EXPECT_NEAR(checked_makespan(a.run(inst, fixtures::fix1_platform()), inst, fixtures::fix1_platform()), 1, 1e-9)
        << a.name;
  }
}

TEST(IndepOffline, Fix4SingleTask) {
  auto inst = fixtures::fix4();
  for (const auto& a : all_algorithms()) {
    // The area relaxation puts 1.1/2.1 > 1/2 of this task on the CPUs.
    Time expected = std::string(a.name) == "round_lp" ? 4 : 1.1;
    EXPECT_NEAR(checked_makespan(a.run(inst, fixtures::fix4_platform()), inst, fixtures::fix4_platform()), expected,
                1e-9)
        << a.name;
  }
}

TEST(IndepOffline, EmptyInstanceGivesEmptySchedule) {
  for (const auto& a : all_algorithms()) {
    EXPECT_EQ(a.run(Instance(), Platform(2, 1)).size(), 0U) << a.name;
  }
}

TEST(IndepOffline, RejectsPrecedenceEdges) {
  auto inst = fixtures::chain({Task{0, 1, 1}, Task{1, 1, 1}});
  for (const auto& a : all_algorithms()) {
    EXPECT_THROW(a.run(inst, Platform(1, 1)), std::invalid_argument) << a.name;
  }
}

TEST(DualSearch, DegenerateIntervalRunsOnce) {
  int calls = 0;
  GuessFn guess = [&](Time) -> std::optional<Schedule> {
    ++calls;
    return Schedule(0);
  };
  auto r = dual_search(guess, DualSearchConfig{2, 2, 1e-3}, Schedule());
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(calls, 1);
  EXPECT_FALSE(r.fallback);
  EXPECT_DOUBLE_EQ(r.lambda, 2);
}

TEST(DualSearch, IterationCountWithinLogBound) {
  const Time lo = 1;
  const Time hi = 9;
  const double eps = 1e-3;
  auto r = dual_search([](Time lambda) -> std::optional<Schedule> {
    if (lambda >= 3.3) return Schedule(0);
    return std::nullopt;
  }, DualSearchConfig{lo, hi, eps}, Schedule());
  EXPECT_LE(r.iterations, static_cast<int>(std::ceil(std::log2((hi - lo) / (eps * lo)))));
  EXPECT_GE(r.lambda, 3.3);
  EXPECT_LE(r.lambda, 3.3 * (1 + eps) + eps);
}

TEST(DualSearch, FallsBackWhenNothingIsAccepted) {
  Schedule fallback(3);
  auto r = dual_search([](Time) { return std::optional<Schedule>(); }, DualSearchConfig{1, 2, 0.1}, fallback);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.schedule.size(), 3U);
}

TEST(DualSearch, CoarsePrecisionStillValid) {
  auto inst = gen_random(RandomSpec{20, 15, 1, 1, 1, 4});
  Platform plat(3, 2);
  EXPECT_FALSE(validate(dualhp(inst, plat, 0.5), inst, plat).has_value());
  EXPECT_FALSE(validate(dp32(inst, plat, 0.5), inst, plat).has_value());
}

TEST(DualSearch, RejectsInvertedBounds) {
  EXPECT_THROW(dual_search([](Time) { return std::optional<Schedule>(); }, DualSearchConfig{3, 2, 0.1}, Schedule()),
               std::invalid_argument);
}

TEST(DualHp, Fix1GuessOneIsAccepted) {
  auto inst = fixtures::fix1();
  auto s = dualhp_guess(inst, Platform(1, 1), 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ((*s)[0].proc, 1);
  EXPECT_EQ((*s)[1].proc, 0);
  EXPECT_DOUBLE_EQ(makespan(*s), 1);
}

TEST(DualHp, Fix1GuessBelowBothTimesIsRefused) {
  EXPECT_FALSE(dualhp_guess(fixtures::fix1(), Platform(1, 1), 0.4).has_value());
}

TEST(DualHp, Fix4ForcedToGpu) {
  auto s = dualhp_guess(fixtures::fix4(), fixtures::fix4_platform(), 1.1);
  ASSERT_TRUE(s.has_value());
  EXPECT_DOUBLE_EQ(makespan(*s), 1.1);
}

TEST(DualHp, RefusesOverloadedCpuSide) {
  // Both tasks are forced to the CPU (GPU time 10 > 2), total 4 > 1 * 2.
  auto inst = Instance({Task{0, 2, 10}, Task{1, 2, 10}});
  EXPECT_FALSE(dualhp_guess(inst, Platform(1, 1), 2).has_value());
  EXPECT_TRUE(dualhp_guess(inst, Platform(1, 1), 4).has_value());
}

TEST(DualHp, AcceptedGuessMakespanAtMostTwiceLambda) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = gen_random(RandomSpec{25, 15, 1, 1, 1, seed});
    Platform plat(1 + seed % 5, 1 + seed % 3);
    Time lb = std::max(trivial_bound(inst), area_bound_closed_form(inst, plat));
    for (double f : {1.0, 1.2, 1.5, 2.0}) {
      Time lambda = lb * f;
      if (auto s = dualhp_guess(inst, plat, lambda)) {
        EXPECT_LE(checked_makespan(*s, inst, plat), 2 * lambda + 1e-9);
      }
    }
  }
}

TEST(Dp32, Fix1) {
  auto s = dp32_guess(fixtures::fix1(), Platform(1, 1), 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_DOUBLE_EQ(makespan(*s), 1);
  EXPECT_DOUBLE_EQ(makespan(dp32(fixtures::fix1(), Platform(1, 1))), 1);
}

TEST(Dp32, ThreeUnitTasksOnTwoPlusOne) {
  auto inst = Instance(identical(3, 1, 1));
  Platform plat(2, 1);
  Time ms = checked_makespan(dp32(inst, plat), inst, plat);
  EXPECT_LE(ms, (1.5 + 0.5) * 1 * (1 + 1e-3));
  EXPECT_DOUBLE_EQ(ms, 1);
}

TEST(Dp32, SizeGuard) {
  auto inst = gen_random(RandomSpec{2000, 15, 1, 1, 1, 1});
  EXPECT_THROW(dp32_guess(inst, Platform(40, 8), 100), std::length_error);
}

TEST(Dp32, RefusesWhenATaskFitsNowhere) {
  EXPECT_FALSE(dp32_guess(fixtures::fix1(), Platform(1, 1), 0.9).has_value());
}

TEST(Dp32, AcceptedGuessRespectsShelfBound) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = gen_random(RandomSpec{20, 15, 1, 1, 1, seed});
    Platform plat(1 + seed % 4, 1 + seed % 3);
    Time lb = std::max(trivial_bound(inst), area_bound_closed_form(inst, plat));
    double rho = 1.5 + 1.0 / (2 * plat.k);
    for (double f : {1.0, 1.1, 1.3, 1.7}) {
      Time lambda = lb * f;
      if (auto s = dp32_guess(inst, plat, lambda)) {
        EXPECT_LE(checked_makespan(*s, inst, plat), rho * lambda + 1e-9) << seed;
      }
    }
  }
}

TEST(Dp32, AcceptsEveryGuessAboveAKnownSchedule) {
  // Any real schedule's makespan is at least OPT, so the DP must accept it.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = gen_random(RandomSpec{15, 15, 1, 1, 1, seed});
    Platform plat(1 + seed % 3, 1 + seed % 2);
    Time known = makespan(balanced_makespan(inst, plat));
    EXPECT_TRUE(dp32_guess(inst, plat, known).has_value()) << seed;
    EXPECT_TRUE(dualhp_guess(inst, plat, known).has_value()) << seed;
  }
}

TEST(HeteroPrio, Fix1HeadAndTail) {
  auto s = heteroprio(fixtures::fix1(), Platform(1, 1));
  EXPECT_EQ(s[1].proc, 0);
  EXPECT_EQ(s[0].proc, 1);
  EXPECT_DOUBLE_EQ(makespan(s), 1);
}

TEST(HeteroPrio, Fix4SpoliatesOntoGpu) {
  auto s = heteroprio(fixtures::fix4(), fixtures::fix4_platform());
  EXPECT_EQ(s[0].proc, 4);
  EXPECT_DOUBLE_EQ(s[0].start, 0);
  EXPECT_DOUBLE_EQ(makespan(s), 1.1);
}

TEST(HeteroPrio, SymmetricPair) {
  auto s = heteroprio(Instance(identical(2, 1, 1)), Platform(1, 1));
  EXPECT_DOUBLE_EQ(makespan(s), 1);
  EXPECT_NE(s[0].proc, s[1].proc);
}

TEST(HeteroPrio, NeverLeavesBothSidesIdleWhileWorkWaits) {
  // Before the first idle time every processor is busy; the first idle
  // instant is at most the area bound.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = gen_random(RandomSpec{40, 15, 1, 1, 1, seed});
    Platform plat(2 + seed % 3, 1 + seed % 2);
    auto s = heteroprio(inst, plat);
    checked_makespan(s, inst, plat);
    Time first_idle = kInfinity;
    MachineState ms(plat);
    for (std::size_t j = 0; j < inst.size(); ++j) ms.occupy(s[j].proc, static_cast<int>(j), s[j].start, s[j].finish);
    for (int p = 0; p < plat.size(); ++p) {
      Time t = 0;
      for (const auto& iv : ms.intervals(p)) {
        if (time_gt(iv.start, t)) break;
        t = iv.finish;
      }
      first_idle = std::min(first_idle, t);
    }
    EXPECT_LE(first_idle, area_bound_closed_form(inst, plat) + 1e-6) << seed;
  }
}

TEST(Balanced, Fix1Allocation) {
  auto alloc = balanced_allocation(fixtures::fix1(), Platform(1, 1));
  EXPECT_EQ(alloc.best[0], Resource::gpu);
  EXPECT_EQ(alloc.best[1], Resource::cpu);
  EXPECT_DOUBLE_EQ(allocation_estimate(fixtures::fix1(), Platform(1, 1), alloc.best), 1);
}

TEST(Balanced, EstimateDefinition) {
  auto inst = Instance({Task{0, 4, 1}, Task{1, 2, 3}, Task{2, 1, 6}});
  Platform plat(2, 1);
  Assignment x{Resource::gpu, Resource::cpu, Resource::cpu};
  // W_cpu/m = 1.5, W_gpu/k = 1, longest CPU task 2, longest GPU task 1.
  EXPECT_DOUBLE_EQ(allocation_estimate(inst, plat, x), 2);
}

TEST(Balanced, AllCpuFavoredTriggersSwitch) {
  auto inst = Instance({Task{0, 1, 3}, Task{1, 1, 3}, Task{2, 1, 3}});
  Platform plat(1, 1);
  auto alloc = balanced_allocation(inst, plat);
  // After the switch each GPU move raises the estimate to 3 and is rolled
  // back as dominating; the inversion is captured before the first move.
  for (Resource r : alloc.inversion) EXPECT_EQ(r, Resource::cpu);
  for (Resource r : alloc.best) EXPECT_EQ(r, Resource::cpu);
  EXPECT_DOUBLE_EQ(makespan(balanced_estimate(inst, plat)), 3);
}

TEST(Balanced, TightnessFamilyReachesTwoMMinusTwo) {
  auto w = gen_balanced_tightness(4, 0.1);
  auto s = balanced_estimate(w.instance, w.platform);
  EXPECT_NEAR(checked_makespan(s, w.instance, w.platform), 6, 1e-9);
  EXPECT_NEAR(makespan(w.reference), 4, 1e-9);
  EXPECT_LE(makespan(balanced_makespan(w.instance, w.platform)), 6 + 1e-9);
}

TEST(Balanced, SingleTaskTakesFasterSide) {
  auto inst = Instance({Task{0, 3, 5}});
  EXPECT_DOUBLE_EQ(makespan(balanced_estimate(inst, Platform(2, 1))), 3);
  EXPECT_DOUBLE_EQ(makespan(balanced_makespan(inst, Platform(2, 1))), 3);
}

TEST(Balanced, TwoUnitTasks) {
  EXPECT_DOUBLE_EQ(makespan(balanced_makespan(Instance(identical(2, 1, 1)), Platform(1, 1))), 1);
}

TEST(Balanced, MakespanVariantNeverWorse) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    RandomSpec spec{static_cast<std::size_t>(5 + seed % 40), 15, 1, seed % 2 ? 0.2 : 1.0, seed % 3 ? 1.0 : 0.2, seed};
    auto inst = gen_random(spec);
    Platform plat(1 + seed % 6, 1 + seed % 3);
    Time est = checked_makespan(balanced_estimate(inst, plat), inst, plat);
    Time mk = checked_makespan(balanced_makespan(inst, plat), inst, plat);
    EXPECT_LE(mk, est + 1e-9) << seed;
  }
}

TEST(Lpt, FastMakespanMatchesSimulation) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto inst = gen_random(RandomSpec{30, 15, 1, 1, 1, seed});
    Platform plat(1 + seed % 5, 1 + seed % 4);
    Assignment x(inst.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = (j * seed) % 3 == 0 ? Resource::cpu : Resource::gpu;
    EXPECT_NEAR(lpt_makespan(inst, plat, x), makespan(lpt_schedule(inst, plat, x)), 1e-9);
  }
}

TEST(Clb2c, Fix1) {
  auto s = clb2c(fixtures::fix1(), Platform(1, 1));
  EXPECT_EQ(s[1].proc, 0);
  EXPECT_EQ(s[0].proc, 1);
  EXPECT_DOUBLE_EQ(makespan(s), 1);
}

TEST(Clb2c, IdenticalUnitTasksSplitInHalves) {
  for (int n = 1; n <= 9; ++n) {
    EXPECT_DOUBLE_EQ(makespan(clb2c(Instance(identical(n, 1, 1)), Platform(1, 1))), std::ceil(n / 2.0)) << n;
  }
}

TEST(Clb2c, Fix4GoesToGpu) {
  auto s = clb2c(fixtures::fix4(), fixtures::fix4_platform());
  EXPECT_EQ(s[0].proc, 4);
}

TEST(SortedEct, Fix3) {
  auto inst = fixtures::fix3();
  EXPECT_DOUBLE_EQ(checked_makespan(sorted_ect(inst, fixtures::fix3_platform()), inst, fixtures::fix3_platform()), 2);
}

TEST(SortedEct, LargestAverageFirst) {
  auto inst = Instance({Task{0, 1, 1}, Task{1, 5, 5}});
  auto s = sorted_ect(inst, Platform(1, 1));
  EXPECT_EQ(s[1].proc, 0);
  EXPECT_EQ(s[0].proc, 1);
}

TEST(MinMin, Fix1TieByIdPlacesAFirst) {
  auto s = minmin(fixtures::fix1(), Platform(1, 1));
  EXPECT_EQ(s[0].proc, 1);
  EXPECT_EQ(s[1].proc, 0);
  EXPECT_DOUBLE_EQ(s[0].start, 0);
}

TEST(MinMin, TwoGpuFavoredTasks) {
  auto inst = Instance(identical(2, 10, 1));
  auto s = minmin(inst, Platform(1, 1));
  EXPECT_EQ(s[0].proc, 1);
  EXPECT_EQ(s[1].proc, 1);
  EXPECT_DOUBLE_EQ(makespan(s), 2);
}

TEST(RoundLp, Fix1) { EXPECT_DOUBLE_EQ(makespan(round_lp(fixtures::fix1(), Platform(1, 1))), 1); }

TEST(RoundLp, SingleFractionalTask) {
  auto inst = Instance({Task{0, 2, 1}});
  Time ms = checked_makespan(round_lp(inst, Platform(1, 1)), inst, Platform(1, 1));
  EXPECT_TRUE(ms == 1 || ms == 2);
}

TEST(RoundLp, IdenticalTasksWithinTwiceArea) {
  auto inst = Instance(identical(9, 2, 2));
  Platform plat(2, 2);
  Time ms = checked_makespan(round_lp(inst, plat), inst, plat);
  EXPECT_LE(ms, 2 * area_bound_closed_form(inst, plat) + 1e-9);
}

TEST(IndepOffline, RandomRunsAreValidAndDeterministic) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomSpec spec{static_cast<std::size_t>(10 + seed * 3), 15, 1, seed % 2 ? 0.2 : 1.0, 1.0, seed};
    auto inst = gen_random(spec);
    Platform plat(1 + seed % 4, 1 + seed % 3);
    Time lb = std::max(trivial_bound(inst), area_bound_closed_form(inst, plat));
    for (const auto& a : all_algorithms()) {
      auto s1 = a.run(inst, plat);
      auto s2 = a.run(inst, plat);
      Time ms = checked_makespan(s1, inst, plat);
      EXPECT_GE(ms, lb - 1e-9) << a.name;
      for (std::size_t j = 0; j < inst.size(); ++j) {
        EXPECT_EQ(s1[j].proc, s2[j].proc) << a.name;
        EXPECT_EQ(s1[j].start, s2[j].start) << a.name;
      }
    }
  }
}
