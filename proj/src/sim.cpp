#include "ssrta/sim.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ssrta {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Release: return "release";
    case EventKind::Arrive: return "arrive";
    case EventKind::Preempt: return "preempt";
    case EventKind::Resume: return "resume";
    case EventKind::Complete: return "complete";
    case EventKind::Finish: return "finish";
    case EventKind::Suspend: return "suspend";
    case EventKind::Idle: return "idle";
  }
  return "unknown";
}

void validate_pattern(const TaskSystem& ts, const ReleasePattern& rp) {
  const auto& hp = ts.hp_tasks();
  const auto& ss = ts.ss_task();
  if (rp.hp_releases.size() != hp.size())
    throw PatternError("pattern lists releases for " + std::to_string(rp.hp_releases.size()) +
                       " hp tasks, system has " + std::to_string(hp.size()));
  for (std::size_t i = 0; i < hp.size(); ++i) {
    const auto& rel = rp.hp_releases[i];
    for (std::size_t k = 1; k < rel.size(); ++k) {
      if (rel[k] - rel[k - 1] < hp[i].period)
        throw PatternError("minimum inter-arrival time violated for task " + std::to_string(hp[i].id) +
                           " between releases " + rel[k - 1].str() + " and " + rel[k].str());
    }
  }
  if (!rp.hp_exec_times.empty()) {
    if (rp.hp_exec_times.size() != hp.size())
      throw PatternError("hp execution times must cover every hp task");
    for (std::size_t i = 0; i < hp.size(); ++i) {
      if (rp.hp_exec_times[i].size() != rp.hp_releases[i].size())
        throw PatternError("task " + std::to_string(hp[i].id) + ": one execution time per release required");
      for (const auto& e : rp.hp_exec_times[i])
        if (e < Time(0) || e > hp[i].wcet)
          throw PatternError("task " + std::to_string(hp[i].id) + ": execution time " + e.str() +
                             " outside [0, WCET]");
    }
  }
  if (rp.susp_durations.size() != ss.susp_intervals.size())
    throw PatternError("pattern has " + std::to_string(rp.susp_durations.size()) +
                       " suspension durations, segmented task has " +
                       std::to_string(ss.susp_intervals.size()) + " intervals");
  for (std::size_t j = 0; j < rp.susp_durations.size(); ++j)
    if (rp.susp_durations[j] < Time(0) || rp.susp_durations[j] > ss.susp_intervals[j])
      throw PatternError("suspension " + std::to_string(j + 1) + " duration " + rp.susp_durations[j].str() +
                         " outside [0, " + ss.susp_intervals[j].str() + "]");
  if (!rp.ss_exec_times.empty()) {
    if (rp.ss_exec_times.size() != ss.comp_segments.size())
      throw PatternError("one execution time per segment required");
    for (std::size_t j = 0; j < ss.comp_segments.size(); ++j)
      if (rp.ss_exec_times[j] <= Time(0) || rp.ss_exec_times[j] > ss.comp_segments[j])
        throw PatternError("segment " + std::to_string(j + 1) + " execution time " +
                           rp.ss_exec_times[j].str() + " outside (0, WCET]");
  }
}

Time default_horizon(const TaskSystem& ts, const ReleasePattern& rp) {
  Time work = ts.ss_task().total_computation() + ts.ss_task().total_suspension();
  Time max_t = ts.ss_task().period;
  Time min_t = ts.ss_task().period;
  for (const auto& t : ts.hp_tasks()) {
    work += t.wcet;
    max_t = std::max(max_t, t.period);
    min_t = std::min(min_t, t.period);
  }
  return rp.ss_job_release + Time(2) * work * Time(ceil_div(max_t, min_t));
}

namespace {

struct Job {
  std::size_t prio;  // hp index; hp_count for the segmented task
  Time release;
  Time remaining;
  int task;
  int index;
  bool started = false;
};

bool higher(const Job& a, const Job& b) {
  if (a.prio != b.prio) return a.prio < b.prio;
  if (a.release != b.release) return a.release < b.release;
  return a.index < b.index;
}

}  // namespace

SimTrace simulate(const TaskSystem& ts, const ReleasePattern& rp, std::optional<Time> horizon) {
  validate_pattern(ts, rp);
  const auto& hp = ts.hp_tasks();
  const auto& ss = ts.ss_task();
  const std::size_t n_hp = hp.size();
  const std::size_t m = ss.segment_count();
  const int ss_id = ts.ss_id();

  SimTrace tr;
  tr.horizon = horizon ? *horizon : default_horizon(ts, rp);
  tr.hp_response.resize(n_hp);
  for (std::size_t i = 0; i < n_hp; ++i) tr.hp_response[i].assign(rp.hp_releases[i].size(), std::nullopt);

  auto hp_exec = [&](std::size_t i, std::size_t k) {
    return rp.hp_exec_times.empty() ? hp[i].wcet : rp.hp_exec_times[i][k];
  };
  auto ss_exec = [&](std::size_t j) { return rp.ss_exec_times.empty() ? ss.comp_segments[j] : rp.ss_exec_times[j]; };

  std::vector<std::size_t> next_rel(n_hp, 0);
  std::vector<Job> ready;
  std::size_t next_seg = 0;  // next segment awaiting arrival
  std::optional<Time> next_seg_arrival = rp.ss_job_release;
  bool ss_done = false;

  Time t = rp.ss_job_release;
  for (std::size_t i = 0; i < n_hp; ++i)
    if (!rp.hp_releases[i].empty()) t = std::min(t, rp.hp_releases[i].front());

  int running_task = -1, running_index = -1;

  auto admit = [&]() {
    for (std::size_t i = 0; i < n_hp; ++i) {
      while (next_rel[i] < rp.hp_releases[i].size() && rp.hp_releases[i][next_rel[i]] <= t) {
        std::size_t k = next_rel[i]++;
        Time r = rp.hp_releases[i][k];
        tr.events.push_back({r, EventKind::Release, hp[i].id, static_cast<int>(k + 1)});
        ready.push_back({i, r, hp_exec(i, k), hp[i].id, static_cast<int>(k + 1)});
      }
    }
    if (next_seg_arrival && *next_seg_arrival <= t) {
      Time g = *next_seg_arrival;
      tr.seg_arrival.push_back(g);
      tr.events.push_back({g, EventKind::Arrive, ss_id, static_cast<int>(next_seg + 1)});
      ready.push_back({n_hp, g, ss_exec(next_seg), ss_id, static_cast<int>(next_seg + 1)});
      next_seg_arrival.reset();
    }
  };

  auto next_arrival_after = [&]() -> std::optional<Time> {
    std::optional<Time> best = next_seg_arrival;
    for (std::size_t i = 0; i < n_hp; ++i) {
      if (next_rel[i] < rp.hp_releases[i].size()) {
        Time r = rp.hp_releases[i][next_rel[i]];
        if (!best || r < *best) best = r;
      }
    }
    return best;
  };

  auto push_slice = [&](Time a, Time b, int task, int index) {
    if (a == b) return;
    if (!tr.slices.empty()) {
      auto& last = tr.slices.back();
      if (last.end == a && last.task == task && last.index == index) {
        last.end = b;
        return;
      }
    }
    tr.slices.push_back({a, b, task, index});
  };

  while (t < tr.horizon) {
    admit();
    std::optional<Time> next = next_arrival_after();
    if (ready.empty()) {
      if (!next) break;
      Time until = std::min(*next, tr.horizon);
      tr.events.push_back({t, EventKind::Idle, 0, 0});
      push_slice(t, until, 0, 0);
      running_task = running_index = -1;
      t = until;
      continue;
    }
    auto it = std::min_element(ready.begin(), ready.end(), higher);
    if (running_task >= 0 && (running_task != it->task || running_index != it->index)) {
      bool still_ready = std::any_of(ready.begin(), ready.end(), [&](const Job& j) {
        return j.task == running_task && j.index == running_index;
      });
      if (still_ready) tr.events.push_back({t, EventKind::Preempt, running_task, running_index});
    }
    if (it->started && (running_task != it->task || running_index != it->index))
      tr.events.push_back({t, EventKind::Resume, it->task, it->index});
    it->started = true;
    running_task = it->task;
    running_index = it->index;

    Time stop = t + it->remaining;
    if (next && *next < stop) stop = *next;
    if (tr.horizon < stop) stop = tr.horizon;
    push_slice(t, stop, it->task, it->index);
    it->remaining -= stop - t;
    t = stop;
    if (it->remaining == Time(0)) {
      Job done = *it;
      ready.erase(it);
      running_task = running_index = -1;
      if (done.prio == n_hp) {
        std::size_t j = next_seg;
        tr.seg_finish.push_back(t);
        tr.events.push_back({t, EventKind::Finish, ss_id, static_cast<int>(j + 1)});
        ++next_seg;
        if (next_seg < m) {
          tr.events.push_back({t, EventKind::Suspend, ss_id, static_cast<int>(j + 1)});
          next_seg_arrival = t + rp.susp_durations[j];
        } else {
          ss_done = true;
          tr.ss_response = t - rp.ss_job_release;
        }
      } else {
        tr.events.push_back({t, EventKind::Complete, done.task, done.index});
        tr.hp_response[done.prio][static_cast<std::size_t>(done.index - 1)] = t - done.release;
      }
    }
    if (ss_done && ready.empty() && !next_arrival_after()) break;
  }
  return tr;
}

std::optional<Time> response_time_of_pattern(const TaskSystem& ts, const ReleasePattern& rp,
                                             std::optional<Time> horizon) {
  return simulate(ts, rp, horizon).ss_response;
}

std::string events_tsv(const SimTrace& trace) {
  std::ostringstream os;
  os << "time\tevent\ttask\tindex\n";
  for (const auto& e : trace.events)
    os << e.time.str() << '\t' << to_string(e.kind) << '\t' << e.task << '\t' << e.index << '\n';
  return os.str();
}

}  // namespace ssrta
