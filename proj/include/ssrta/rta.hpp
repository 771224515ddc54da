#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "ssrta/model.hpp"

namespace ssrta {

enum class OrdinaryStatus { Schedulable, DeadlineMiss, Unbounded };

std::string to_string(OrdinaryStatus s);

struct OrdinaryResult {
  OrdinaryStatus status = OrdinaryStatus::Schedulable;
  std::optional<Time> wcrt;            // worst response over the busy window
  std::optional<int> first_miss_job;   // 1-based job number within the busy window
  std::size_t jobs_examined = 0;
  std::string note;
};

/// Classical fixed-priority response-time analysis for a hp task.
/// A single job is analyzed when its response stays within its period;
/// otherwise the level-i busy window is walked job by job.
OrdinaryResult wcrt_ordinary(const TaskSystem& ts, int task_id);

/// Interference acting on one computation segment of the segmented task.
struct InterferenceSpec {
  std::set<int> periodic;  // task ids releasing periodically from the segment arrival
  std::set<int> one_shot;  // task ids contributing exactly one job
  Time extra_load;         // additional one-shot work not tied to a task

  static InterferenceSpec all_periodic(const TaskSystem& ts);
};

struct FixedPointCap {
  std::size_t max_iterations = 10'000'000;
  std::optional<Time> max_time;
};

struct SegmentResponse {
  bool converged = false;
  Time value;  // the fixed point, or the last iterate when not converged
  std::size_t iterations = 0;
  std::string reason;
};

/// Least t > 0 with C_seg + one-shot work + sum of periodic ceil(t/T) C = t.
/// segment is 0-based.
SegmentResponse segment_response(const TaskSystem& ts, std::size_t segment, const InterferenceSpec& spec,
                                 const FixedPointCap& cap = {});

/// Response of a segment of length V+1 carrying one-shot load w beside
/// a periodic (C=V, T=3V) task. Requires V >= 3 and w >= 0.
Time r_of_w(std::int64_t V, const Time& w);

}  // namespace ssrta
