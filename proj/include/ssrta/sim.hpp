#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssrta/model.hpp"
#include "ssrta/time.hpp"

namespace ssrta {

/// Concrete releases for one job of the segmented task and the hp jobs around it.
/// hp vectors are indexed by priority position (TaskSystem::hp_tasks order).
struct ReleasePattern {
  std::vector<std::vector<Time>> hp_releases;
  Time ss_job_release;
  std::vector<Time> susp_durations;
  std::vector<std::vector<Time>> hp_exec_times;  // empty = WCET for every job
  std::vector<Time> ss_exec_times;               // empty = WCET for every segment

  friend bool operator==(const ReleasePattern&, const ReleasePattern&) = default;
};

class PatternError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Throws PatternError naming the first violated constraint.
void validate_pattern(const TaskSystem& ts, const ReleasePattern& rp);

enum class EventKind { Release, Arrive, Preempt, Resume, Complete, Finish, Suspend, Idle };

std::string to_string(EventKind k);

struct Event {
  Time time;
  EventKind kind;
  int task = 0;     // task id; the segmented task uses TaskSystem::ss_id(); 0 for idle
  int index = 0;    // job number (hp) or segment number (segmented), 1-based
};

struct Slice {
  Time start;
  Time end;
  int task = 0;  // 0 = idle
  int index = 0;
};

struct SimTrace {
  std::vector<Time> seg_arrival;
  std::vector<Time> seg_finish;
  std::optional<Time> ss_response;  // empty when the horizon ran out first
  std::vector<std::vector<std::optional<Time>>> hp_response;
  std::vector<Event> events;
  std::vector<Slice> slices;
  Time horizon;

  bool finished() const { return ss_response.has_value(); }
};

/// Crude but safe horizon used when the caller does not supply one.
Time default_horizon(const TaskSystem& ts, const ReleasePattern& rp);

SimTrace simulate(const TaskSystem& ts, const ReleasePattern& rp, std::optional<Time> horizon = {});

std::optional<Time> response_time_of_pattern(const TaskSystem& ts, const ReleasePattern& rp,
                                             std::optional<Time> horizon = {});

/// Tab-separated event log: time, event, task, segment/job.
std::string events_tsv(const SimTrace& trace);

}  // namespace ssrta
