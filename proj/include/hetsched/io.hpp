#pragma once

#include <filesystem>
#include <string>

#include "hetsched/model.hpp"

namespace hetsched {

/// Instance JSON carries a default platform alongside the task graph:
/// {"m":int,"k":int,"tasks":[{"id":int,"cpu":num,"gpu":num}],"edges":[[int,int]]}
struct InstanceFile {
  Instance instance;
  Platform platform;
};

std::string instance_to_json(const Instance& instance, const Platform& platform);
InstanceFile instance_from_json(const std::string& text);

/// {"placements":[{"id":int,"proc":int,"start":num}]}, ordered by task index.
std::string schedule_to_json(const Schedule& schedule, const Instance& instance);
/// Finish times are recomputed from the instance durations.
Schedule schedule_from_json(const std::string& text, const Instance& instance, const Platform& platform);

InstanceFile read_instance_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace hetsched
