#include "hetsched/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "hetsched/bounds.hpp"
#include "hetsched/gen.hpp"
#include "hetsched/io.hpp"
#include "hetsched/oracle.hpp"

namespace hetsched {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

std::map<std::string, std::string> read_manifest_families(const fs::path& dir) {
  std::map<std::string, std::string> families;
  fs::path path = dir / kManifest;
  if (!fs::exists(path)) return families;
  json j = json::parse(read_text_file(path));
  for (const json& e : j.at("instances")) families[e.at("file").get<std::string>()] = e.at("family").get<std::string>();
  return families;
}

std::string csv_optional(const std::optional<Time>& value) { return value ? format_number(*value) : ""; }

std::vector<std::pair<const InstanceEntry*, Platform>> instance_platform_pairs(
    const std::vector<InstanceEntry>& instances, const std::vector<Platform>& platforms) {
  std::vector<std::pair<const InstanceEntry*, Platform>> pairs;
  for (const InstanceEntry& e : instances) {
    if (platforms.empty()) {
      pairs.emplace_back(&e, e.platform);
    } else {
      for (const Platform& p : platforms) pairs.emplace_back(&e, p);
    }
  }
  return pairs;
}

std::string row_prefix(const InstanceEntry& e, const Platform& p) {
  return e.name + "," + e.family + "," + std::to_string(e.instance.size()) + "," + std::to_string(p.m) + "," +
         std::to_string(p.k);
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace

std::vector<InstanceEntry> load_instance_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  auto families = read_manifest_families(dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.filename() != kManifest) files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::vector<InstanceEntry> out;
  for (const fs::path& p : files) {
    InstanceFile file = read_instance_file(p);
    std::string name = p.filename().string();
    auto it = families.find(name);
    out.push_back(InstanceEntry{p.stem().string(), it == families.end() ? "unknown" : it->second,
                                std::move(file.instance), file.platform});
  }
  return out;
}

std::vector<Platform> parse_platforms(const std::string& text) {
  std::vector<Platform> platforms;
  for (const std::string& item : split(text, ',')) {
    auto parts = split(item, ':');
    if (parts.size() != 2) throw std::invalid_argument("platform must be m:k, got '" + item + "'");
    try {
      std::size_t used_m = 0;
      std::size_t used_k = 0;
      int m = std::stoi(parts[0], &used_m);
      int k = std::stoi(parts[1], &used_k);
      if (used_m != parts[0].size() || used_k != parts[1].size()) throw std::invalid_argument(item);
      platforms.emplace_back(m, k);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("platform must be m:k with m, k >= 1, got '" + item + "'");
    }
  }
  if (platforms.empty()) throw std::invalid_argument("empty platform list");
  return platforms;
}

std::vector<std::string> parse_algorithms(const std::string& text) {
  auto all = algorithms();
  std::vector<std::string> names;
  for (const std::string& item : split(text, ',')) {
    if (item == "all") {
      for (const auto& a : all) names.push_back(a.name);
      continue;
    }
    find_algorithm(item);
    names.push_back(item);
  }
  if (names.empty()) throw std::invalid_argument("empty algorithm list");
  std::vector<std::string> unique;
  for (const std::string& n : names) {
    if (std::find(unique.begin(), unique.end(), n) == unique.end()) unique.push_back(n);
  }
  return unique;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  if (count > 0) worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

RunOutput run_grid(const std::vector<InstanceEntry>& instances, const RunOptions& options) {
  std::vector<AlgorithmInfo> algos;
  for (const std::string& name : options.algorithms) algos.push_back(find_algorithm(name, options.registry));
  auto pairs = instance_platform_pairs(instances, options.platforms);
  std::vector<Time> bounds(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
    bounds[i] = compute_bounds(pairs[i].first->instance, pairs[i].second).best;
  });

  struct Job {
    std::size_t pair;
    std::size_t algo;
  };
  std::vector<Job> jobs;
  RunOutput output;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t a = 0; a < algos.size(); ++a) {
      if (algos[a].accepts(pairs[i].first->instance)) {
        jobs.push_back(Job{i, a});
      } else {
        ++output.incompatible;
      }
    }
  }
  std::vector<std::optional<ResultRow>> rows(jobs.size());
  std::vector<std::string> refusals(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t j) {
    const auto& [entry, platform] = pairs[jobs[j].pair];
    const AlgorithmInfo& algo = algos[jobs[j].algo];
    Schedule schedule;
    auto start = std::chrono::steady_clock::now();
    try {
      schedule = algo.run(entry->instance, platform);
    } catch (const std::length_error& e) {
      refusals[j] = algo.name + " on " + entry->name + ": " + e.what();
      return;
    }
    auto stop = std::chrono::steady_clock::now();
    ResultRow row;
    row.instance = entry->name;
    row.family = entry->family;
    row.n = entry->instance.size();
    row.m = platform.m;
    row.k = platform.k;
    row.algorithm = algo.name;
    row.valid = !validate(schedule, entry->instance, platform).has_value();
    row.makespan = makespan(schedule);
    row.lower_bound = bounds[jobs[j].pair];
    row.ratio = row.lower_bound > 0 ? row.makespan / row.lower_bound : 1.0;
    row.runtime_us = std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
    rows[j] = std::move(row);
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (rows[j]) output.rows.push_back(std::move(*rows[j]));
    if (!refusals[j].empty()) output.skipped.push_back(refusals[j]);
  }
  return output;
}

int run_exit_code(const std::vector<ResultRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.valid; }) ? 0 : 2;
}

std::string results_csv(std::vector<ResultRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.instance, a.m, a.k, a.algorithm) < std::tie(b.instance, b.m, b.k, b.algorithm);
  });
  std::string out = std::string(kResultsVersion) + "\n" + kResultsColumns + "\n";
  for (const ResultRow& r : rows) {
    out += r.instance + "," + r.family + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," +
           std::to_string(r.k) + "," + r.algorithm + "," + format_number(r.makespan) + "," +
           format_number(r.lower_bound) + "," + format_number(r.ratio) + "," + std::to_string(r.runtime_us) + "," +
           (r.valid ? "true" : "false") + "\n";
  }
  return out;
}

namespace {

struct GenerateArgs {
  std::string family;
  std::size_t n = 300;
  std::vector<int> tiles;
  double cv_cpu = 1;
  double cv_gpu = 1;
  double cpu_mean = 15;
  double gpu_mean = 1;
  double edge_probability = 0.1;
  int count = 1;
  std::uint64_t seed = 1;
  int m = 10;
  int k = 2;
  double eps = 0.01;
  int size = 10;
  std::string kernels;
  std::string out;
};

struct Generated {
  std::string file;
  std::string family;
  Instance instance;
  Platform platform;
  std::uint64_t seed;
};

std::string number_tag(double value) { return format_number(value); }

std::vector<Generated> generate(const GenerateArgs& a) {
  std::vector<Generated> out;
  Platform platform(a.m, a.k);
  auto index = [](int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", i);
    return std::string(buf);
  };
  if (a.family == "random" || a.family == "random_dag") {
    bool dag = a.family == "random_dag";
    std::string family = a.family + ":cv_cpu=" + number_tag(a.cv_cpu) + ":cv_gpu=" + number_tag(a.cv_gpu);
    std::string stem = a.family + "_cpu" + number_tag(a.cv_cpu) + "_gpu" + number_tag(a.cv_gpu);
    if (dag) {
      family += ":p=" + number_tag(a.edge_probability);
      stem += "_p" + number_tag(a.edge_probability);
    }
    for (int i = 0; i < a.count; ++i) {
      RandomSpec spec{a.n, a.cpu_mean, a.gpu_mean, a.cv_cpu, a.cv_gpu, a.seed + static_cast<std::uint64_t>(i)};
      Instance inst = dag ? gen_random_dag(spec, a.edge_probability) : gen_random(spec);
      out.push_back(Generated{stem + "_s" + std::to_string(spec.seed) + ".json", family, std::move(inst), platform,
                              spec.seed});
    }
    return out;
  }
  if (a.family == "cholesky" || a.family == "lu" || a.family == "qr") {
    if (a.tiles.empty()) throw std::invalid_argument("--tiles is required for tiled families");
    KernelTable kernels = a.kernels.empty() ? default_kernels() : load_kernels(a.kernels);
    for (int t : a.tiles) {
      Instance inst = gen_tiled_dag(parse_tiled_app(a.family), t, kernels);
      out.push_back(Generated{a.family + "_t" + index(t) + ".json", a.family + ":tiles=" + std::to_string(t),
                              std::move(inst), platform, 0});
    }
    return out;
  }
  const std::string prefix = "adversary:";
  if (a.family.rfind(prefix, 0) == 0) {
    std::string name = a.family.substr(prefix.size());
    Witness w;
    if (name == "pg") {
      w = gen_pg_adversary(a.m, a.k, a.eps);
    } else if (name == "balanced") {
      w = gen_balanced_tightness(a.m, a.eps);
    } else if (name == "qa") {
      w = gen_qa_adversary(a.m, a.k, a.eps, a.size);
    } else if (name == "online_dag") {
      throw std::invalid_argument("the on-line DAG adversary adapts to the policy and cannot be written to a file");
    } else {
      throw std::invalid_argument("unknown adversary: " + name);
    }
    std::string stem = "adversary_" + name + "_m" + std::to_string(w.platform.m) + "_k" + std::to_string(w.platform.k);
    out.push_back(Generated{stem + ".json", a.family, std::move(w.instance), w.platform, 0});
    return out;
  }
  throw std::invalid_argument("unknown family: " + a.family);
}

void write_generated(const fs::path& dir, const std::vector<Generated>& items) {
  fs::create_directories(dir);
  json manifest = {{"version", 1}, {"instances", json::array()}};
  std::map<std::string, json> entries;
  fs::path manifest_path = dir / kManifest;
  if (fs::exists(manifest_path)) {
    json existing = json::parse(read_text_file(manifest_path));
    for (const json& e : existing.at("instances")) {
      entries[e.at("file").get<std::string>()] = e;
    }
  }
  for (const Generated& g : items) {
    write_text_file(dir / g.file, instance_to_json(g.instance, g.platform));
    entries[g.file] = {{"file", g.file}, {"family", g.family}, {"n", g.instance.size()}, {"seed", g.seed}};
  }
  for (auto& [file, e] : entries) manifest["instances"].push_back(e);
  write_text_file(manifest_path, manifest.dump(2) + "\n");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::string oracle_csv(const std::vector<InstanceEntry>& instances, const std::vector<Platform>& platforms,
                       const OracleLimits& limits, int threads) {
  auto pairs = instance_platform_pairs(instances, platforms);
  std::vector<std::string> lines(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto& [entry, platform] = pairs[i];
    std::optional<Time> opt;
    try {
      opt = optimal_makespan(entry->instance, platform, limits);
    } catch (const OracleLimitError&) {
    }
    lines[i] = row_prefix(*entry, platform) + "," + csv_optional(opt);
  });
  std::sort(lines.begin(), lines.end());
  std::string text = std::string(kOracleVersion) + "\n" + kOracleColumns + "\n";
  for (const std::string& l : lines) text += l + "\n";
  return text;
}

std::string bounds_csv(const std::vector<InstanceEntry>& instances, const std::vector<Platform>& platforms,
                       int threads) {
  auto pairs = instance_platform_pairs(instances, platforms);
  std::vector<std::string> lines(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto& [entry, platform] = pairs[i];
    BoundReport b = compute_bounds(entry->instance, platform);
    lines[i] = row_prefix(*entry, platform) + "," + format_number(b.trivial) + "," + format_number(b.area) + "," +
               csv_optional(b.lp_prec) + "," + format_number(b.critical_path) + "," + format_number(b.best);
  });
  std::sort(lines.begin(), lines.end());
  std::string text = std::string(kBoundsVersion) + "\n" + kBoundsColumns + "\n";
  for (const std::string& l : lines) text += l + "\n";
  return text;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Makespan scheduling toolkit for CPU/GPU platforms", "hetsched"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write instance files and a manifest");
  generate_cmd->add_option("--family", gen.family, "random|random_dag|cholesky|lu|qr|adversary:pg|balanced|qa")
      ->required();
  generate_cmd->add_option("--n", gen.n, "Tasks per random instance")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--tiles", gen.tiles, "Tile counts for tiled families")->delimiter(',');
  generate_cmd->add_option("--cv-cpu", gen.cv_cpu, "Coefficient of variation of CPU times")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--cv-gpu", gen.cv_gpu, "Coefficient of variation of GPU times")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--cpu-mean", gen.cpu_mean, "Mean CPU time")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--gpu-mean", gen.gpu_mean, "Mean GPU time")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--edge-probability", gen.edge_probability, "Edge probability for random_dag")
      ->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--count", gen.count, "Random instances to generate")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--seed", gen.seed, "Seed of the first instance");
  generate_cmd->add_option("--m", gen.m, "CPUs of the stored platform")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--k", gen.k, "GPUs of the stored platform")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--eps", gen.eps, "Adversary epsilon")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--size", gen.size, "QA adversary size")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--kernels", gen.kernels, "Kernel duration JSON for tiled families");
  generate_cmd->add_option("--out", gen.out, "Output directory")->required();

  std::string algos_text;
  std::string instances_dir;
  std::string platforms_text;
  std::string out_path;
  int threads = 0;
  RegistryOptions registry;
  auto* run_cmd = app.add_subcommand("run", "Run algorithms over an instance directory and write results CSV");
  run_cmd->add_option("--algos", algos_text, "Comma-separated algorithm names or 'all'")->required();
  run_cmd->add_option("--instances", instances_dir, "Instance directory")->required();
  run_cmd->add_option("--platforms", platforms_text, "Platforms as m:k,...; default: each file's platform");
  run_cmd->add_option("--out", out_path, "Output CSV (default stdout)");
  run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("--gamma", registry.mixed_gamma, "Mixed-ECT-QA threshold")->check(CLI::PositiveNumber);
  run_cmd->add_option("--epsilon", registry.epsilon, "Dual search precision")->check(CLI::PositiveNumber);

  OracleLimits limits;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optima for small instances");
  oracle_cmd->add_option("--instances", instances_dir, "Instance directory")->required();
  oracle_cmd->add_option("--platforms", platforms_text, "Platforms as m:k,...; default: each file's platform");
  oracle_cmd->add_option("--out", out_path, "Output CSV (default stdout)");
  oracle_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  oracle_cmd->add_option("--max-tasks", limits.max_tasks, "Largest instance to solve");
  oracle_cmd->add_option("--max-processors", limits.max_processors, "Largest platform to solve");

  auto* bounds_cmd = app.add_subcommand("bounds", "Lower bounds for every instance");
  bounds_cmd->add_option("--instances", instances_dir, "Instance directory")->required();
  bounds_cmd->add_option("--platforms", platforms_text, "Platforms as m:k,...; default: each file's platform");
  bounds_cmd->add_option("--out", out_path, "Output CSV (default stdout)");
  bounds_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 1;
  }

  try {
    std::vector<Platform> platforms = platforms_text.empty() ? std::vector<Platform>{} : parse_platforms(platforms_text);
    threads = resolve_threads(threads);
    if (*generate_cmd) {
      write_generated(gen.out, generate(gen));
      return 0;
    }
    if (*run_cmd) {
      RunOptions options{parse_algorithms(algos_text), platforms, threads, registry};
      RunOutput result = run_grid(load_instance_dir(instances_dir), options);
      for (const std::string& s : result.skipped) err << "skipped " << s << "\n";
      if (result.incompatible > 0) {
        err << "skipped " << result.incompatible << " runs of independent-task algorithms on DAG instances\n";
      }
      int code = run_exit_code(result.rows);
      write_output(out_path, results_csv(std::move(result.rows)), out);
      if (code != 0) err << "some schedules failed validation\n";
      return code;
    }
    if (*oracle_cmd) {
      write_output(out_path, oracle_csv(load_instance_dir(instances_dir), platforms, limits, threads), out);
      return 0;
    }
    write_output(out_path, bounds_csv(load_instance_dir(instances_dir), platforms, threads), out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hetsched
