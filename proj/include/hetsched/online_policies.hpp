#pragma once

#include <limits>
#include <memory>
#include <string>

#include "hetsched/engine.hpp"

namespace hetsched {

// On-line policies. Each decides a processor on arrival; the task then
// starts there as soon as the processor is free.

/// Earliest completion over all processors (PG for independent tasks,
/// ECT for DAGs).
class EctPolicy : public OnlinePolicy {
 public:
  std::string name() const override { return "ect"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<EctPolicy>(); }
};

/// GPU iff cpu/m >= gpu/k, then the earliest idle processor of that type.
class LgPolicy : public OnlinePolicy {
 public:
  std::string name() const override { return "lg"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<LgPolicy>(); }
};

/// LG plus a second GPU route for tasks whose CPU time covers a lower bound
/// on running the set R of such tasks on the GPUs.
class MgPolicy : public OnlinePolicy {
 public:
  std::string name() const override { return "mg"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<MgPolicy>(); }

  std::size_t r_size() const { return r_size_; }
  Time r_max() const { return r_max_; }
  Time r_sum() const { return r_sum_; }

 private:
  std::size_t r_size_ = 0;
  Time r_max_ = 0;
  Time r_sum_ = 0;
};

/// Rule 1: GPU if cpu >= (GPU wait) + gpu. Rule 2: CPU if cpu/a <= gpu/b.
/// Otherwise GPU. Al4 uses a = m, b = k; ER-LS uses a = sqrt(m), b = sqrt(k).
class Al4Policy : public OnlinePolicy {
 public:
  std::string name() const override { return "al4"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<Al4Policy>(); }
};

class ErlsPolicy : public OnlinePolicy {
 public:
  std::string name() const override { return "erls"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<ErlsPolicy>(); }
};

/// CPU iff cpu/gpu <= sqrt(m/k), then list placement on that type.
class QaPolicy : public OnlinePolicy {
 public:
  std::string name() const override { return "qa"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<QaPolicy>(); }
};

/// Resource type QA picks for `task` on `platform`.
Resource qa_side(const Task& task, const Platform& platform);

/// Follows ECT while the ECT makespan stays within gamma times the makespan
/// QA would reach on the revealed graph; after the first violation every
/// decision is QA's.
class MixedPolicy : public OnlinePolicy {
 public:
  explicit MixedPolicy(double gamma = 1.0) : gamma_(gamma) {}

  std::string name() const override { return "mixed"; }
  int choose(const Task& task, Time arrival, const OnlineView& view) override;
  std::unique_ptr<OnlinePolicy> clone_fresh() const override { return std::make_unique<MixedPolicy>(gamma_); }

  double gamma() const { return gamma_; }
  bool stay_ect() const { return stay_ect_; }
  /// Number of decisions taken before the switch to QA (all, if none).
  std::size_t ect_decisions() const { return ect_decisions_; }

 private:
  double gamma_;
  bool stay_ect_ = true;
  std::size_t ect_decisions_ = 0;
};

inline constexpr double kNeverSwitch = std::numeric_limits<double>::infinity();

}  // namespace hetsched
