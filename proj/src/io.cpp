#include "ssrta/io.hpp"

#include <fstream>
#include <sstream>

namespace ssrta {

using nlohmann::json;

ParseError::ParseError(const std::string& what, std::size_t line, std::string field)
    : std::runtime_error(what), line_(line), field_(std::move(field)) {}

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object", 0, path);
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing field '" + key + "'", 0, path + "." + key);
  return *it;
}

const json& require_array(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ParseError(path + "." + key + ": expected an array", 0, path + "." + key);
  return v;
}

std::int64_t int_from_json(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw ParseError(field + ": expected an integer", 0, field);
}

std::vector<Time> times_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + ": expected an array", 0, field);
  std::vector<Time> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(time_from_json(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

json times_to_json(const std::vector<Time>& v) {
  json out = json::array();
  for (const auto& t : v) out.push_back(to_json(t));
  return out;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

}  // namespace

json to_json(const Time& t) { return t.str(); }

Time time_from_json(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Time(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Time::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(field + ": " + e.what(), 0, field);
    }
  }
  if (j.is_number_float()) throw ParseError(field + ": floating-point values are not accepted, use \"p/q\"", 0, field);
  throw ParseError(field + ": expected a rational string or integer", 0, field);
}

json to_json(const TaskSystem& ts) {
  json hp = json::array();
  for (const auto& t : ts.hp_tasks())
    hp.push_back({{"id", t.id}, {"C", to_json(t.wcet)}, {"T", to_json(t.period)}, {"D", to_json(t.deadline)}, {"priority", t.priority}});
  const auto& ss = ts.ss_task();
  json s = {{"C", times_to_json(ss.comp_segments)},
            {"S", times_to_json(ss.susp_intervals)},
            {"D", to_json(ss.deadline)},
            {"T", to_json(ss.period)}};
  return {{"hp_tasks", hp}, {"ss_task", s}};
}

TaskSystem task_system_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("task system: expected a JSON object", 0, "");
  std::vector<SporadicTask> hp;
  if (j.contains("hp_tasks")) {
    const json& arr = require_array(j, "hp_tasks", "");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string path = "hp_tasks[" + std::to_string(k) + "]";
      const json& t = arr[k];
      SporadicTask task;
      task.id = static_cast<int>(int_from_json(require(t, "id", path), path + ".id"));
      task.wcet = time_from_json(require(t, "C", path), path + ".C");
      task.period = time_from_json(require(t, "T", path), path + ".T");
      task.deadline = time_from_json(require(t, "D", path), path + ".D");
      task.priority = t.contains("priority") ? static_cast<int>(int_from_json(t["priority"], path + ".priority")) : task.id;
      hp.push_back(task);
    }
  }
  const json& s = require(j, "ss_task", "");
  SegmentedTask ss;
  ss.comp_segments = times_from_json(require(s, "C", "ss_task"), "ss_task.C");
  ss.susp_intervals = s.contains("S") ? times_from_json(s["S"], "ss_task.S") : std::vector<Time>{};
  ss.deadline = time_from_json(require(s, "D", "ss_task"), "ss_task.D");
  ss.period = time_from_json(require(s, "T", "ss_task"), "ss_task.T");
  return TaskSystem(std::move(hp), std::move(ss));
}

json to_json(const ReleasePattern& rp) {
  json hp = json::array();
  for (const auto& r : rp.hp_releases) hp.push_back(times_to_json(r));
  json out = {{"schema", 1},
              {"hp_releases", hp},
              {"ss_job_release", to_json(rp.ss_job_release)},
              {"susp_durations", times_to_json(rp.susp_durations)}};
  if (!rp.hp_exec_times.empty()) {
    json ex = json::array();
    for (const auto& r : rp.hp_exec_times) ex.push_back(times_to_json(r));
    out["hp_exec_times"] = ex;
  }
  if (!rp.ss_exec_times.empty()) out["ss_exec_times"] = times_to_json(rp.ss_exec_times);
  return out;
}

ReleasePattern pattern_from_json(const json& j) {
  ReleasePattern rp;
  const json& hp = require_array(j, "hp_releases", "pattern");
  for (std::size_t k = 0; k < hp.size(); ++k) rp.hp_releases.push_back(times_from_json(hp[k], "hp_releases[" + std::to_string(k) + "]"));
  rp.ss_job_release = j.contains("ss_job_release") ? time_from_json(j["ss_job_release"], "ss_job_release") : Time(0);
  if (j.contains("susp_durations")) rp.susp_durations = times_from_json(j["susp_durations"], "susp_durations");
  if (j.contains("hp_exec_times")) {
    const json& ex = require_array(j, "hp_exec_times", "pattern");
    for (std::size_t k = 0; k < ex.size(); ++k)
      rp.hp_exec_times.push_back(times_from_json(ex[k], "hp_exec_times[" + std::to_string(k) + "]"));
  }
  if (j.contains("ss_exec_times")) rp.ss_exec_times = times_from_json(j["ss_exec_times"], "ss_exec_times");
  return rp;
}

json to_json(const MilpAssignment& a) {
  json N = json::array(), O = json::array();
  for (const auto& row : a.N) N.push_back(row);
  for (const auto& row : a.O) O.push_back(times_to_json(row));
  return {{"schema", 1}, {"N", N}, {"O", O}, {"R", times_to_json(a.R)}};
}

MilpAssignment assignment_from_json(const json& j) {
  MilpAssignment a;
  const json& N = require_array(j, "N", "assignment");
  const json& O = require_array(j, "O", "assignment");
  for (std::size_t i = 0; i < N.size(); ++i) {
    const std::string path = "N[" + std::to_string(i) + "]";
    if (!N[i].is_array()) throw ParseError(path + ": expected an array", 0, path);
    std::vector<std::int64_t> row;
    for (std::size_t k = 0; k < N[i].size(); ++k) row.push_back(int_from_json(N[i][k], path + "[" + std::to_string(k) + "]"));
    a.N.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < O.size(); ++i) a.O.push_back(times_from_json(O[i], "O[" + std::to_string(i) + "]"));
  a.R = times_from_json(require(j, "R", "assignment"), "R");
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TaskSystem parse_task_system(const std::string& text, InputFormat format) {
  json j;
  if (format == InputFormat::Toml) {
    j = parse_toml_subset(text);
  } else {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("JSON syntax error: ") + e.what(), line_of_offset(text, e.byte), "");
    }
  }
  return task_system_from_json(j);
}

TaskSystem load_task_system(const std::string& path) {
  const bool toml = path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0;
  return parse_task_system(read_file(path), toml ? InputFormat::Toml : InputFormat::Json);
}

}  // namespace ssrta
