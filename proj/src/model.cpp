#include "ssrta/model.hpp"

#include <algorithm>
#include <set>

namespace ssrta {

std::string to_string(DeadlineClass c) {
  switch (c) {
    case DeadlineClass::Implicit: return "implicit";
    case DeadlineClass::Constrained: return "constrained";
    case DeadlineClass::Arbitrary: return "arbitrary";
  }
  return "unknown";
}

DeadlineClass SporadicTask::deadline_class() const {
  if (deadline == period) return DeadlineClass::Implicit;
  if (deadline < period) return DeadlineClass::Constrained;
  return DeadlineClass::Arbitrary;
}

Time SegmentedTask::total_computation() const {
  Time sum;
  for (const auto& c : comp_segments) sum += c;
  return sum;
}

Time SegmentedTask::total_suspension() const {
  Time sum;
  for (const auto& s : susp_intervals) sum += s;
  return sum;
}

TaskSystem::TaskSystem(std::vector<SporadicTask> hp_tasks, SegmentedTask ss_task)
    : hp_(std::move(hp_tasks)), ss_(std::move(ss_task)) {
  std::set<int> ids;
  for (const auto& t : hp_) {
    const std::string who = "task " + std::to_string(t.id);
    if (t.id < 1) throw ModelError("task id must be positive (" + who + ")");
    if (!ids.insert(t.id).second) throw ModelError("duplicate task id (" + who + ")");
    if (t.wcet <= Time(0)) throw ModelError("C > 0 violated (" + who + ")");
    if (t.period <= Time(0)) throw ModelError("T > 0 violated (" + who + ")");
    if (t.deadline <= Time(0)) throw ModelError("D > 0 violated (" + who + ")");
  }
  std::stable_sort(hp_.begin(), hp_.end(),
                   [](const SporadicTask& a, const SporadicTask& b) { return a.priority < b.priority; });
  for (std::size_t k = 1; k < hp_.size(); ++k) {
    if (hp_[k].priority == hp_[k - 1].priority)
      throw ModelError("priority tie between task " + std::to_string(hp_[k - 1].id) + " and task " +
                       std::to_string(hp_[k].id) + "; a strict total order is required");
  }

  if (ss_.comp_segments.empty()) throw ModelError("segmented task needs at least one computation segment");
  if (ss_.susp_intervals.size() + 1 != ss_.comp_segments.size())
    throw ModelError("segment/suspension arity: " + std::to_string(ss_.comp_segments.size()) +
                     " segments need " + std::to_string(ss_.comp_segments.size() - 1) +
                     " suspension intervals, got " + std::to_string(ss_.susp_intervals.size()));
  for (std::size_t j = 0; j < ss_.comp_segments.size(); ++j)
    if (ss_.comp_segments[j] <= Time(0))
      throw ModelError("segment " + std::to_string(j + 1) + " of the segmented task: C > 0 violated");
  for (std::size_t j = 0; j < ss_.susp_intervals.size(); ++j)
    if (ss_.susp_intervals[j] < Time(0))
      throw ModelError("suspension " + std::to_string(j + 1) + " of the segmented task: S >= 0 violated");
  if (ss_.period <= Time(0)) throw ModelError("segmented task: T > 0 violated");
  if (ss_.deadline <= Time(0)) throw ModelError("segmented task: D > 0 violated");
  if (ss_.deadline > ss_.period) throw ModelError("segmented task: D <= T violated");
}

std::size_t TaskSystem::index_of(int id) const {
  for (std::size_t k = 0; k < hp_.size(); ++k)
    if (hp_[k].id == id) return k;
  throw ModelError("unknown hp task id " + std::to_string(id));
}

int TaskSystem::ss_id() const {
  int m = 0;
  for (const auto& t : hp_) m = std::max(m, t.id);
  return m + 1;
}

bool operator==(const SporadicTask& a, const SporadicTask& b) {
  return a.id == b.id && a.wcet == b.wcet && a.period == b.period && a.deadline == b.deadline &&
         a.priority == b.priority;
}

bool operator==(const SegmentedTask& a, const SegmentedTask& b) {
  return a.comp_segments == b.comp_segments && a.susp_intervals == b.susp_intervals &&
         a.deadline == b.deadline && a.period == b.period;
}

bool operator==(const TaskSystem& a, const TaskSystem& b) { return a.hp_ == b.hp_ && a.ss_ == b.ss_; }

Time utilization(const TaskSystem& ts) {
  Time u = hp_utilization(ts, ts.hp_count());
  return u + ts.ss_task().total_computation() / ts.ss_task().period;
}

Time hp_utilization(const TaskSystem& ts, std::size_t count) {
  Time u;
  for (std::size_t k = 0; k < count && k < ts.hp_count(); ++k) u += ts.hp_tasks()[k].utilization();
  return u;
}

}  // namespace ssrta
