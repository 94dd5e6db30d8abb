#include "hetsched/gen.hpp"

#include <cmath>
#include <set>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <json.hpp>

#include "hetsched/io.hpp"

namespace hetsched {

namespace {

double draw_gamma(boost::random::mt19937_64& rng, double mean, double cv) {
  if (!(mean > 0) || !(cv > 0)) throw std::invalid_argument("gamma mean and cv must be positive");
  double shape = 1.0 / (cv * cv);
  double scale = mean * cv * cv;
  boost::random::gamma_distribution<double> dist(shape, scale);
  double v = dist(rng);
  // A zero draw is possible in floating point for tiny shapes.
  return std::max(v, std::numeric_limits<double>::min());
}

std::vector<Task> random_tasks(const RandomSpec& spec, boost::random::mt19937_64& rng) {
  std::vector<Task> tasks;
  tasks.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double cpu = draw_gamma(rng, spec.cpu_mean, spec.cpu_cv);
    double gpu = draw_gamma(rng, spec.gpu_mean, spec.gpu_cv);
    tasks.push_back(Task{static_cast<int>(i), cpu, gpu});
  }
  return tasks;
}

using Tile = std::pair<int, int>;

class TileGraph {
 public:
  explicit TileGraph(const KernelTable& kernels) : kernels_(kernels) {}

  void call(const std::string& kernel, std::initializer_list<Tile> reads, std::initializer_list<Tile> writes) {
    auto it = kernels_.find(kernel);
    if (it == kernels_.end()) throw std::invalid_argument("kernel table has no entry for " + kernel);
    int id = static_cast<int>(tasks_.size());
    tasks_.push_back(Task{id, it->second.cpu, it->second.gpu});
    std::set<int> deps;
    for (const Tile& t : reads) add_writer(t, deps);
    for (const Tile& t : writes) add_writer(t, deps);
    for (int d : deps) edges_.push_back(Edge{d, id});
    for (const Tile& t : writes) last_writer_[t] = id;
  }

  Instance build(bool with_edges) {
    if (!with_edges) edges_.clear();
    return Instance(std::move(tasks_), std::move(edges_));
  }

 private:
  void add_writer(const Tile& t, std::set<int>& deps) const {
    auto w = last_writer_.find(t);
    if (w != last_writer_.end()) deps.insert(w->second);
  }

  const KernelTable& kernels_;
  std::vector<Task> tasks_;
  std::vector<Edge> edges_;
  std::map<Tile, int> last_writer_;
};

}  // namespace

Instance gen_random(const RandomSpec& spec) {
  boost::random::mt19937_64 rng(spec.seed);
  return Instance(random_tasks(spec, rng));
}

Instance gen_random_dag(const RandomSpec& spec, double edge_probability) {
  boost::random::mt19937_64 rng(spec.seed);
  auto tasks = random_tasks(spec, rng);
  boost::random::bernoulli_distribution<double> coin(edge_probability);
  std::vector<Edge> edges;
  for (std::size_t j = 1; j < spec.n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (coin(rng)) edges.push_back(Edge{static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return Instance(std::move(tasks), std::move(edges));
}

TiledApp parse_tiled_app(const std::string& name) {
  if (name == "cholesky") return TiledApp::cholesky;
  if (name == "lu") return TiledApp::lu;
  if (name == "qr") return TiledApp::qr;
  throw std::invalid_argument("unknown tiled application '" + name + "'");
}

const char* to_string(TiledApp app) {
  switch (app) {
    case TiledApp::cholesky: return "cholesky";
    case TiledApp::lu: return "lu";
    case TiledApp::qr: return "qr";
  }
  return "unknown";
}

KernelTable default_kernels() {
  return {
      {"potrf", {10, 8}},  {"trsm", {20, 2}},  {"syrk", {20, 1.5}},  {"gemm", {40, 1.5}}, {"getrf", {15, 10}},
      {"geqrt", {20, 12}}, {"ormqr", {40, 4}}, {"tsqrt", {30, 15}}, {"tsmqr", {80, 3}},
  };
}

KernelTable load_kernels(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  KernelTable table = default_kernels();
  for (const auto& [name, value] : j.items()) {
    KernelTime t{value.at("cpu").get<double>(), value.at("gpu").get<double>()};
    if (!(t.cpu > 0) || !(t.gpu > 0)) throw std::invalid_argument("kernel " + name + " needs positive times");
    table[name] = t;
  }
  return table;
}

Instance gen_tiled_dag(TiledApp app, int tiles, const KernelTable& kernels, bool with_edges) {
  if (tiles < 1) throw std::invalid_argument("tile count must be at least 1");
  TileGraph g(kernels);
  const int t = tiles;
  for (int k = 0; k < t; ++k) {
    switch (app) {
      case TiledApp::cholesky:
        g.call("potrf", {}, {{k, k}});
        for (int i = k + 1; i < t; ++i) g.call("trsm", {{k, k}}, {{i, k}});
        for (int i = k + 1; i < t; ++i) {
          g.call("syrk", {{i, k}}, {{i, i}});
          for (int j = k + 1; j < i; ++j) g.call("gemm", {{i, k}, {j, k}}, {{i, j}});
        }
        break;
      case TiledApp::lu:
        g.call("getrf", {}, {{k, k}});
        for (int j = k + 1; j < t; ++j) g.call("trsm", {{k, k}}, {{k, j}});
        for (int i = k + 1; i < t; ++i) g.call("trsm", {{k, k}}, {{i, k}});
        for (int i = k + 1; i < t; ++i) {
          for (int j = k + 1; j < t; ++j) g.call("gemm", {{i, k}, {k, j}}, {{i, j}});
        }
        break;
      case TiledApp::qr:
        g.call("geqrt", {}, {{k, k}});
        for (int j = k + 1; j < t; ++j) g.call("ormqr", {{k, k}}, {{k, j}});
        for (int i = k + 1; i < t; ++i) {
          g.call("tsqrt", {}, {{k, k}, {i, k}});
          for (int j = k + 1; j < t; ++j) g.call("tsmqr", {{i, k}}, {{k, j}, {i, j}});
        }
        break;
    }
  }
  return g.build(with_edges);
}

std::size_t tiled_task_count(TiledApp app, int tiles) {
  const std::size_t t = static_cast<std::size_t>(tiles);
  if (app == TiledApp::cholesky) return t + t * (t - 1) + t * (t - 1) * (t - 2) / 6;
  return t + t * (t - 1) + (t - 1) * t * (2 * t - 1) / 6;
}

Witness gen_pg_adversary(int m, int k, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  Platform platform(m, k);
  const int rounds = m / k;
  std::vector<Task> tasks;
  for (int r = 0; r < rounds; ++r) {
    for (int i = 0; i < k; ++i) tasks.push_back(Task{static_cast<int>(tasks.size()), 1 + eps, 1});
    for (int i = 0; i < m; ++i) tasks.push_back(Task{static_cast<int>(tasks.size()), 1, eps});
  }
  Instance instance(std::move(tasks));
  // Long tasks each get a CPU; short ones are packed on the GPUs.
  Schedule ref(instance.size());
  MachineState gpus(platform);
  int next_cpu = 0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (instance.task(i).gpu == 1) {
      place(ref, instance, platform, i, next_cpu++, 0);
    } else {
      auto [proc, start] = gpus.earliest_on(Resource::gpu, 0);
      place(ref, instance, platform, i, proc, start);
      gpus.occupy(proc, static_cast<int>(i), start, ref[i].finish);
    }
  }
  return Witness{std::move(instance), platform, std::move(ref)};
}

Witness gen_balanced_tightness(int m, double eps) {
  if (m <= 1) throw std::invalid_argument("tightness family needs m > 1");
  if (!(eps > 0) || !(eps < 1.0 / (m - 1))) throw std::invalid_argument("tightness family needs 0 < eps < 1/(m-1)");
  Platform platform(m, 1);
  std::vector<Task> tasks;
  for (int i = 0; i < m; ++i) tasks.push_back(Task{i, 1, 1 + eps});
  for (int i = 0; i <= m; ++i) tasks.push_back(Task{m + i, static_cast<double>(m - 1), static_cast<double>(m)});
  Instance instance(std::move(tasks));
  Schedule ref(instance.size());
  place(ref, instance, platform, m, m, 0);
  for (int i = 0; i < m; ++i) {
    place(ref, instance, platform, m + 1 + i, i, 0);
    place(ref, instance, platform, i, i, m - 1);
  }
  return Witness{std::move(instance), platform, std::move(ref)};
}

Witness gen_qa_adversary(int m, int k, double eps, int size) {
  if (m < k) throw std::invalid_argument("QA adversary needs m >= k");
  if (size < 1 || !(eps > 0)) throw std::invalid_argument("QA adversary needs positive size and eps");
  Platform platform(m, k);
  const double s = std::sqrt(static_cast<double>(m) / k);
  if (!(eps < s)) throw std::invalid_argument("QA adversary needs eps < sqrt(m/k)");
  const double small_gpu = eps;
  const int shorts = m * size;
  std::vector<Task> tasks;
  for (int i = 0; i < shorts; ++i) tasks.push_back(Task{i, s + eps, 1});
  const int trigger = shorts;
  const int long_task = shorts + 1;
  tasks.push_back(Task{trigger, 2 * s, small_gpu});
  tasks.push_back(Task{long_task, (s - eps) * size * s, size * s});
  Instance instance(std::move(tasks), {Edge{trigger, long_task}});

  Schedule ref(instance.size());
  const int gpu = platform.first(Resource::gpu);
  place(ref, instance, platform, trigger, gpu, 0);
  place(ref, instance, platform, long_task, gpu, small_gpu);
  for (int i = 0; i < shorts; ++i) place(ref, instance, platform, i, i % m, (i / m) * (s + eps));
  return Witness{std::move(instance), platform, std::move(ref)};
}

AdversaryRun run_online_dag_adversary(int m, int k, int rounds, OnlinePolicy& policy) {
  Platform platform(m, k);
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m) / k)));
  if (s * s * k != m) throw std::invalid_argument("round adversary needs sqrt(m/k) to be an integer");
  if (rounds < 1) throw std::invalid_argument("round adversary needs at least one round");
  const int per_round = k * s;

  OnlineSession session(platform, policy);
  std::vector<int> critical;
  Time arrival = 0;
  std::vector<int> preds;
  int next_id = 0;
  for (int r = 0; r < rounds; ++r) {
    int last = -1;
    Time last_finish = 0;
    for (int i = 0; i < per_round; ++i) {
      int id = next_id++;
      Placement p = session.submit(Task{id, static_cast<double>(s), 1}, arrival, preds);
      if (last < 0 || p.finish > last_finish) {
        last = id;
        last_finish = p.finish;
      }
    }
    critical.push_back(last);
    preds = {last};
    arrival = last_finish;
  }

  Instance instance = session.instance();
  Schedule ref(instance.size());
  const int cpu_tasks = per_round - k;
  for (int r = 0; r < rounds; ++r) {
    int extra_gpu = platform.first(Resource::gpu) + 1;
    int cpu = (r % s) * cpu_tasks;
    for (int i = 0; i < per_round; ++i) {
      int id = r * per_round + i;
      std::size_t idx = instance.index_of(id);
      if (id == critical[r]) {
        place(ref, instance, platform, idx, platform.first(Resource::gpu), r);
      } else if (extra_gpu < platform.size()) {
        place(ref, instance, platform, idx, extra_gpu++, r);
      } else {
        place(ref, instance, platform, idx, cpu++, r);
      }
    }
  }
  return AdversaryRun{Witness{std::move(instance), platform, std::move(ref)}, session.schedule()};
}

}  // namespace hetsched
