#include "hetsched/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hetsched {

using nlohmann::json;

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), end);
}

std::string instance_to_json(const Instance& instance, const Platform& platform) {
  json j;
  j["m"] = platform.m;
  j["k"] = platform.k;
  j["tasks"] = json::array();
  for (const Task& t : instance.tasks()) {
    j["tasks"].push_back({{"id", t.id}, {"cpu", t.cpu}, {"gpu", t.gpu}});
  }
  j["edges"] = json::array();
  for (const Edge& e : instance.edges()) j["edges"].push_back({e.from, e.to});
  return j.dump();
}

InstanceFile instance_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<Task> tasks;
  for (const auto& t : j.at("tasks")) {
    tasks.push_back(Task{t.at("id").get<int>(), t.at("cpu").get<double>(), t.at("gpu").get<double>()});
  }
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) edges.push_back(Edge{e.at(0).get<int>(), e.at(1).get<int>()});
  }
  return InstanceFile{Instance(std::move(tasks), std::move(edges)), Platform(j.at("m").get<int>(), j.at("k").get<int>())};
}

std::string schedule_to_json(const Schedule& schedule, const Instance& instance) {
  json j;
  j["placements"] = json::array();
  for (std::size_t i = 0; i < instance.size(); ++i) {
    j["placements"].push_back({{"id", instance.task(i).id}, {"proc", schedule[i].proc}, {"start", schedule[i].start}});
  }
  return j.dump();
}

Schedule schedule_from_json(const std::string& text, const Instance& instance, const Platform& platform) {
  json j = json::parse(text);
  Schedule s(instance.size());
  for (const auto& p : j.at("placements")) {
    std::size_t idx = instance.index_of(p.at("id").get<int>());
    int proc = p.at("proc").get<int>();
    Time start = p.at("start").get<double>();
    s[idx].proc = proc;
    s[idx].start = start;
    s[idx].finish = platform.valid_processor(proc) ? start + instance.task(idx).time_on(platform.type_of(proc)) : start;
  }
  return s;
}

InstanceFile read_instance_file(const std::filesystem::path& path) { return instance_from_json(read_text_file(path)); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hetsched
