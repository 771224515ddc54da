#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssrta/time.hpp"

namespace ssrta {

class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class DeadlineClass { Implicit, Constrained, Arbitrary };

std::string to_string(DeadlineClass c);

struct SporadicTask {
  int id = 0;
  Time wcet;
  Time period;
  Time deadline;
  int priority = 0;  // lower value = higher priority

  DeadlineClass deadline_class() const;
  Time utilization() const { return wcet / period; }
};

struct SegmentedTask {
  std::vector<Time> comp_segments;
  std::vector<Time> susp_intervals;
  Time deadline;
  Time period;

  std::size_t segment_count() const { return comp_segments.size(); }
  Time total_computation() const;
  Time total_suspension() const;
};

/// n-1 ordinary sporadic tasks plus one lowest-priority segmented task.
/// The constructor validates every invariant and orders hp tasks by priority.
class TaskSystem {
public:
  TaskSystem(std::vector<SporadicTask> hp_tasks, SegmentedTask ss_task);

  const std::vector<SporadicTask>& hp_tasks() const { return hp_; }
  const SegmentedTask& ss_task() const { return ss_; }
  std::size_t hp_count() const { return hp_.size(); }
  std::size_t segment_count() const { return ss_.segment_count(); }

  /// Position of a hp task in priority order; throws ModelError for unknown ids.
  std::size_t index_of(int id) const;
  /// Identifier used for the segmented task in reports (one past the largest hp id).
  int ss_id() const;

  friend bool operator==(const TaskSystem& a, const TaskSystem& b);

private:
  std::vector<SporadicTask> hp_;
  SegmentedTask ss_;
};

bool operator==(const SporadicTask& a, const SporadicTask& b);
bool operator==(const SegmentedTask& a, const SegmentedTask& b);

Time utilization(const TaskSystem& ts);

/// Utilization of the hp tasks with priority index < count.
Time hp_utilization(const TaskSystem& ts, std::size_t count);

}  // namespace ssrta
