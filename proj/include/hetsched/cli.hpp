#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetsched/model.hpp"
#include "hetsched/registry.hpp"

namespace hetsched {

inline constexpr const char* kResultsVersion = "# hetsched results v1";
inline constexpr const char* kResultsColumns =
    "instance,family,n,m,k,algorithm,makespan,lower_bound,ratio,runtime_us,valid";
inline constexpr const char* kOracleVersion = "# hetsched oracle v1";
inline constexpr const char* kOracleColumns = "instance,family,n,m,k,optimum";
inline constexpr const char* kBoundsVersion = "# hetsched bounds v1";
inline constexpr const char* kBoundsColumns = "instance,family,n,m,k,trivial,area,lp_prec,critical_path,best";

struct InstanceEntry {
  std::string name;
  std::string family;
  Instance instance;
  Platform platform;
};

/// Every *.json instance in `dir` except manifest.json, sorted by file name.
/// Families come from manifest.json when present, "unknown" otherwise.
std::vector<InstanceEntry> load_instance_dir(const std::filesystem::path& dir);

/// "m:k,m:k,..."; throws std::invalid_argument on malformed input.
std::vector<Platform> parse_platforms(const std::string& text);

/// "all" or a comma-separated list of registered names; throws
/// std::invalid_argument on unknown names or an empty list.
std::vector<std::string> parse_algorithms(const std::string& text);

struct ResultRow {
  std::string instance;
  std::string family;
  std::size_t n = 0;
  int m = 0;
  int k = 0;
  std::string algorithm;
  Time makespan = 0;
  Time lower_bound = 0;
  double ratio = 0;
  long long runtime_us = 0;
  bool valid = false;
};

struct RunOptions {
  std::vector<std::string> algorithms;
  /// Empty: each instance runs on the platform stored in its file.
  std::vector<Platform> platforms;
  int threads = 1;
  RegistryOptions registry;
};

struct RunOutput {
  std::vector<ResultRow> rows;
  /// Runs refused by the algorithm (size limits), one note each.
  std::vector<std::string> skipped;
  /// Runs not attempted because the algorithm needs independent tasks.
  std::size_t incompatible = 0;
};

/// Runs every (instance, platform, algorithm) pair on a worker pool and
/// validates each schedule. Rows come back in canonical order.
RunOutput run_grid(const std::vector<InstanceEntry>& instances, const RunOptions& options);

/// 0 when every row is valid, 2 otherwise.
int run_exit_code(const std::vector<ResultRow>& rows);

/// Header comment, column line and rows sorted by (instance, m, k, algorithm).
std::string results_csv(std::vector<ResultRow> rows);

/// Calls `job(i)` for i in [0, count) on `threads` workers; rethrows the
/// first exception after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job);

/// Entry point of the `hetsched` tool. Exit codes: 0 success, 2 some
/// schedule failed validation, 1 usage or I/O error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetsched
