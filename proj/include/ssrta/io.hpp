#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ssrta/milp.hpp"
#include "ssrta/model.hpp"
#include "ssrta/sim.hpp"

namespace ssrta {

/// Malformed input. line is 1-based (0 when unknown); field is a JSON-style path.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line, std::string field);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

enum class InputFormat { Json, Toml };

/// Reads a task-set file; the format follows the extension (.toml or anything else as JSON).
/// Throws ParseError for syntax or schema problems and ModelError for invariant violations.
TaskSystem load_task_system(const std::string& path);
TaskSystem parse_task_system(const std::string& text, InputFormat format);

nlohmann::json to_json(const Time& t);
Time time_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json to_json(const TaskSystem& ts);
TaskSystem task_system_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReleasePattern& rp);
ReleasePattern pattern_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MilpAssignment& a);
MilpAssignment assignment_from_json(const nlohmann::json& j);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_file(const std::string& path);

/// Parses the TOML subset used by task-set files (tables, arrays of tables,
/// string/integer scalars and arrays) into the equivalent JSON tree.
nlohmann::json parse_toml_subset(const std::string& text);

}  // namespace ssrta
