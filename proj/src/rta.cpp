#include "ssrta/rta.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ssrta {

std::string to_string(OrdinaryStatus s) {
  switch (s) {
    case OrdinaryStatus::Schedulable: return "schedulable";
    case OrdinaryStatus::DeadlineMiss: return "deadline-miss";
    case OrdinaryStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kMaxIterations = 50'000'000;

// Least fixed point of base + sum ceil(t/T_k) C_k over tasks [0, count), from start.
// Returns nullopt when the iterate passes limit.
std::optional<Time> demand_fixed_point(const TaskSystem& ts, std::size_t count, const Time& base, Time start,
                                       const std::optional<Time>& limit) {
  const auto& hp = ts.hp_tasks();
  Time t = start;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    Time next = base;
    for (std::size_t k = 0; k < count; ++k) next += Time(ceil_div(t, hp[k].period)) * hp[k].wcet;
    if (next == t) return t;
    t = next;
    if (limit && t > *limit) return std::nullopt;
  }
  throw std::runtime_error("fixed-point iteration limit reached");
}

}  // namespace

OrdinaryResult wcrt_ordinary(const TaskSystem& ts, int task_id) {
  const std::size_t i = ts.index_of(task_id);
  const auto& task = ts.hp_tasks()[i];
  const Time u_hp = hp_utilization(ts, i);
  const Time u_all = u_hp + task.utilization();
  OrdinaryResult res;

  // First job. With utilization above one the iteration is only trusted up to T_i.
  std::optional<Time> limit;
  if (u_all > Time(1)) limit = std::max(task.period, task.deadline);
  auto first = demand_fixed_point(ts, i, task.wcet, task.wcet, limit);
  if (!first) {
    res.status = OrdinaryStatus::Unbounded;
    res.note = "utilization of tasks 1.." + std::to_string(i + 1) + " is " + u_all.str() +
               " > 1; demand does not terminate";
    res.first_miss_job = 1;
    return res;
  }
  res.jobs_examined = 1;
  if (*first <= task.period) {
    res.wcrt = *first;
    if (*first > task.deadline) {
      res.status = OrdinaryStatus::DeadlineMiss;
      res.first_miss_job = 1;
    }
    return res;
  }
  if (u_all > Time(1)) {
    res.status = OrdinaryStatus::Unbounded;
    res.note = "busy window unbounded: utilization " + u_all.str() + " > 1";
    res.first_miss_job = *first > task.deadline ? std::optional<int>(1) : std::nullopt;
    return res;
  }

  // Level-i busy window.
  auto busy = demand_fixed_point(ts, i + 1, Time(0), task.wcet, std::nullopt);
  const std::int64_t jobs = ceil_div(*busy, task.period);
  Time worst = *first;
  Time finish = *first;
  if (*first > task.deadline) res.first_miss_job = 1;
  for (std::int64_t q = 1; q < jobs; ++q) {
    Time base = Time(q + 1) * task.wcet;
    finish = *demand_fixed_point(ts, i, base, std::max(finish, base), std::nullopt);
    Time resp = finish - Time(q) * task.period;
    worst = std::max(worst, resp);
    if (resp > task.deadline && !res.first_miss_job) res.first_miss_job = static_cast<int>(q + 1);
  }
  res.jobs_examined = static_cast<std::size_t>(jobs);
  res.wcrt = worst;
  if (res.first_miss_job) res.status = OrdinaryStatus::DeadlineMiss;
  return res;
}

InterferenceSpec InterferenceSpec::all_periodic(const TaskSystem& ts) {
  InterferenceSpec spec;
  for (const auto& t : ts.hp_tasks()) spec.periodic.insert(t.id);
  return spec;
}

SegmentResponse segment_response(const TaskSystem& ts, std::size_t segment, const InterferenceSpec& spec,
                                 const FixedPointCap& cap) {
  if (segment >= ts.segment_count()) throw std::out_of_range("segment index out of range");
  for (int id : spec.periodic)
    if (spec.one_shot.count(id)) throw std::invalid_argument("task " + std::to_string(id) + " both periodic and one-shot");
  if (spec.extra_load < Time(0)) throw std::invalid_argument("one-shot load must be non-negative");

  std::vector<const SporadicTask*> periodic;
  Time base = ts.ss_task().comp_segments[segment] + spec.extra_load;
  Time u;
  for (int id : spec.one_shot) base += ts.hp_tasks()[ts.index_of(id)].wcet;
  for (int id : spec.periodic) {
    const auto& t = ts.hp_tasks()[ts.index_of(id)];
    periodic.push_back(&t);
    u += t.utilization();
  }

  SegmentResponse res;
  if (u >= Time(1)) {
    res.value = base;
    res.reason = "periodic utilization " + u.str() + " >= 1";
    return res;
  }
  Time t = base;
  for (std::size_t it = 0; it < cap.max_iterations; ++it) {
    Time next = base;
    for (const auto* p : periodic) next += Time(ceil_div(t, p->period)) * p->wcet;
    res.iterations = it + 1;
    if (next == t) {
      res.converged = true;
      res.value = t;
      return res;
    }
    t = next;
    if (cap.max_time && t > *cap.max_time) {
      res.value = t;
      res.reason = "iterate " + t.str() + " exceeds time cap " + cap.max_time->str();
      return res;
    }
  }
  res.value = t;
  res.reason = "iteration cap " + std::to_string(cap.max_iterations) + " reached";
  return res;
}

Time r_of_w(std::int64_t V, const Time& w) {
  if (V < 3) throw std::invalid_argument("r_of_w requires V >= 3");
  if (w < Time(0)) throw std::invalid_argument("r_of_w requires w >= 0");
  const Time base = Time(V + 1) + w;
  return base + Time(ceil_div(base, Time(2 * V))) * Time(V);
}

}  // namespace ssrta
