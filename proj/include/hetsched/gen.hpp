#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "hetsched/engine.hpp"
#include "hetsched/model.hpp"

namespace hetsched {

/// Gamma-distributed independent durations; mean and coefficient of
/// variation per side. Draws come from boost::random::mt19937_64 through
/// boost::random::gamma_distribution, CPU then GPU for each task.
struct RandomSpec {
  std::size_t n = 300;
  double cpu_mean = 15;
  double gpu_mean = 1;
  double cpu_cv = 1;
  double gpu_cv = 1;
  std::uint64_t seed = 1;
};

Instance gen_random(const RandomSpec& spec);

/// Same durations as gen_random plus an edge i->j (i<j) with probability
/// `edge_probability`, drawn after the durations.
Instance gen_random_dag(const RandomSpec& spec, double edge_probability);

enum class TiledApp { cholesky, lu, qr };
TiledApp parse_tiled_app(const std::string& name);
const char* to_string(TiledApp app);

struct KernelTime {
  Time cpu = 1;
  Time gpu = 1;
};
using KernelTable = std::map<std::string, KernelTime>;

/// Built-in kernel durations (same values as config/kernels.json). These are
/// plausible ratios, not measurements of any particular machine.
KernelTable default_kernels();
/// {"potrf":{"cpu":num,"gpu":num},...}; entries override the defaults.
KernelTable load_kernels(const std::filesystem::path& path);

/// Tiled factorization task graph on a t x t tile matrix. Each kernel call
/// reads and writes tiles; a call depends on the last writer of every tile
/// it touches. Ids follow the sequential loop order.
///   cholesky: potrf(k); trsm(i,k); syrk(i,k); gemm(i,j,k)
///   lu:       getrf(k); trsm on row k and column k; gemm(i,j,k)
///   qr:       geqrt(k); ormqr(k,j); tsqrt(i,k); tsmqr(i,j,k)
Instance gen_tiled_dag(TiledApp app, int tiles, const KernelTable& kernels, bool with_edges = true);
std::size_t tiled_task_count(TiledApp app, int tiles);

/// An instance with a known good schedule for comparison.
struct Witness {
  Instance instance;
  Platform platform;
  Schedule reference;
};

/// floor(m/k) rounds, each k tasks (1+eps, 1) then m tasks (1, eps); the
/// on-line feed order is the id order.
Witness gen_pg_adversary(int m, int k, double eps);

/// m tasks (1, 1+eps) and m+1 tasks (m-1, m) on m CPUs and one GPU; the
/// reference schedule has makespan m. Needs m > 1 and 0 < eps < 1/(m-1).
Witness gen_balanced_tightness(int m, double eps);

/// m*size short tasks with acceleration sqrt(m/k)+eps, a tiny GPU-friendly
/// task (largest id) and a long task of acceleration sqrt(m/k)-eps that
/// depends on it. Needs m >= k.
Witness gen_qa_adversary(int m, int k, double eps = 0.01, int size = 10);

struct AdversaryRun {
  Witness witness;
  Schedule policy_schedule;
};

/// Plays the round adversary against `policy`: each round reveals
/// k*sqrt(m/k) tasks (sqrt(m/k), 1); the next round's tasks all depend on
/// the task of the previous round that the policy finished last. Needs
/// sqrt(m/k) to be an integer. The reference pipelines critical tasks on a
/// GPU and has makespan rounds - 1 + sqrt(m/k).
AdversaryRun run_online_dag_adversary(int m, int k, int rounds, OnlinePolicy& policy);

}  // namespace hetsched
