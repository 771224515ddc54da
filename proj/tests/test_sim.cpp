#include <random>

#include "doctest.h"
#include "ssrta/exact.hpp"
#include "ssrta/gap.hpp"
#include "ssrta/hardness.hpp"
#include "ssrta/sim.hpp"

using namespace ssrta;

namespace {

// Pending intervals [release, completion) of every hp job in the trace.
struct Pending {
  std::size_t prio;
  Time from, to;
};

std::vector<Pending> pending_jobs(const TaskSystem& ts, const ReleasePattern& rp, const SimTrace& tr) {
  std::vector<Pending> out;
  for (std::size_t i = 0; i < ts.hp_count(); ++i)
    for (std::size_t k = 0; k < rp.hp_releases[i].size(); ++k) {
      const auto& resp = tr.hp_response[i][k];
      out.push_back({i, rp.hp_releases[i][k], resp ? rp.hp_releases[i][k] + *resp : tr.horizon});
    }
  return out;
}

// No slice runs while a higher-priority job is pending, and the processor
// idles only when nothing at all is pending.
void check_priority_and_work_conservation(const TaskSystem& ts, const ReleasePattern& rp, const SimTrace& tr) {
  const auto pend = pending_jobs(ts, rp, tr);
  auto prio_of = [&](int task) { return task == ts.ss_id() ? ts.hp_count() : ts.index_of(task); };
  for (const auto& s : tr.slices) {
    if (s.end <= s.start) continue;
    const Time mid = (s.start + s.end) / Time(2);
    if (s.task == 0) {
      for (const auto& p : pend) CHECK_FALSE((p.from <= mid && mid < p.to));
      for (std::size_t j = 0; j < tr.seg_finish.size(); ++j) CHECK_FALSE((tr.seg_arrival[j] <= mid && mid < tr.seg_finish[j]));
      continue;
    }
    const std::size_t me = prio_of(s.task);
    for (const auto& p : pend)
      if (p.prio < me) CHECK_FALSE((p.from <= mid && mid < p.to));
  }
}

TaskSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(1, 3), md(1, 3), cd(1, 3), td(4, 12), sd(0, 6);
  std::vector<SporadicTask> hp;
  const int n = nd(rng);
  for (int i = 1; i <= n; ++i) {
    const int t = td(rng);
    hp.push_back({i, Time(cd(rng)), Time(t), Time(t), i});
  }
  SegmentedTask ss;
  const int m = md(rng);
  for (int j = 0; j < m; ++j) ss.comp_segments.push_back(Time(cd(rng)));
  for (int j = 0; j + 1 < m; ++j) ss.susp_intervals.push_back(Time(sd(rng)));
  ss.deadline = ss.period = Time(200);
  return TaskSystem(hp, ss);
}

ReleasePattern random_pattern(const TaskSystem& ts, std::mt19937_64& rng) {
  ReleasePattern rp;
  std::uniform_int_distribution<int> gap(0, 4), count(0, 4);
  for (const auto& t : ts.hp_tasks()) {
    std::vector<Time> rel;
    Time at(gap(rng));
    for (int k = count(rng); k > 0; --k) {
      rel.push_back(at);
      at += t.period + Time(gap(rng));
    }
    rp.hp_releases.push_back(rel);
  }
  for (const auto& s : ts.ss_task().susp_intervals) rp.susp_durations.push_back(s);
  return rp;
}

}  // namespace

TEST_CASE("gadget segment with no one-shot load responds in 2V+1") {
  const std::int64_t V = 4;
  TaskSystem ts({{1, Time(V), Time(3 * V), Time(3 * V), 1}}, SegmentedTask{{Time(V + 1)}, {}, Time(100), Time(100)});
  ReleasePattern rp{{{Time(0), Time(3 * V)}}, Time(0), {}, {}, {}};
  CHECK(response_time_of_pattern(ts, rp) == Time(2 * V + 1));
}

TEST_CASE("empty interference gives the segment time") {
  TaskSystem ts({}, SegmentedTask{{Time(7, 3)}, {}, Time(10), Time(10)});
  CHECK(response_time_of_pattern(ts, ReleasePattern{}) == Time(7, 3));
}

TEST_CASE("releases past the finish leave only computation and suspension") {
  TaskSystem ts({{1, Time(2), Time(5), Time(5), 1}}, SegmentedTask{{Time(1), Time(2)}, {Time(3)}, Time(50), Time(50)});
  ReleasePattern rp{{{Time(40)}}, Time(0), {Time(3)}, {}, {}};
  CHECK(response_time_of_pattern(ts, rp) == Time(6));
}

TEST_CASE("gap family worst pattern responds in 16qm+(m-1)(2q-1)") {
  const TaskSystem ts = build_gap_family(GapFamilyParams::with_default_eps(1, 2));
  const auto ex = exact_wcrt(ts);
  REQUIRE(ex.witness);
  CHECK(response_time_of_pattern(ts, *ex.witness) == Time(33));
}

TEST_CASE("reduction with an all-V partition responds in M(4V+1) plus suspensions") {
  PartitionInstance p{3, 4, {1, 1, 2, 1, 1, 2, 1, 1, 2}};
  const TaskSystem ts = build_reduction_unchecked(p, ReductionVariant::Constrained);
  ReleasePattern rp;
  rp.hp_releases.push_back({Time(0), Time(12), Time(41), Time(53), Time(82), Time(94)});
  const Time arrivals[] = {Time(0), Time(41), Time(82)};
  for (std::size_t k = 0; k < 9; ++k) rp.hp_releases.push_back({arrivals[k / 3]});
  rp.susp_durations = {Time(24), Time(24)};
  const SimTrace tr = simulate(ts, rp);
  REQUIRE(tr.finished());
  CHECK(*tr.ss_response == Time(99));
  CHECK(tr.seg_finish[0] == Time(17));
  CHECK(tr.seg_arrival[1] == Time(41));
}

TEST_CASE("same-instant arrival is preempted by the hp release") {
  TaskSystem ts({{1, Time(1), Time(10), Time(10), 1}}, SegmentedTask{{Time(2)}, {}, Time(10), Time(10)});
  ReleasePattern rp{{{Time(0)}}, Time(0), {}, {}, {}};
  const SimTrace tr = simulate(ts, rp);
  REQUIRE(!tr.slices.empty());
  CHECK(tr.slices.front().task == 1);
  CHECK(*tr.ss_response == Time(3));
}

TEST_CASE("invalid patterns name the violated constraint") {
  TaskSystem ts({{1, Time(1), Time(4), Time(4), 1}}, SegmentedTask{{Time(1), Time(1)}, {Time(2)}, Time(20), Time(20)});
  CHECK_THROWS_WITH_AS(simulate(ts, ReleasePattern{{{Time(0), Time(3)}}, Time(0), {Time(2)}, {}, {}}),
                       doctest::Contains("inter-arrival"), PatternError);
  CHECK_THROWS_WITH_AS(simulate(ts, ReleasePattern{{{Time(0)}}, Time(0), {Time(3)}, {}, {}}), doctest::Contains("suspension"), PatternError);
  CHECK_THROWS_WITH_AS(simulate(ts, ReleasePattern{{{Time(0)}}, Time(0), {Time(1)}, {{Time(2)}}, {}}),
                       doctest::Contains("execution time"), PatternError);
  CHECK_THROWS_AS(simulate(ts, ReleasePattern{{}, Time(0), {Time(1)}, {}, {}}), PatternError);
}

TEST_CASE("horizon exhaustion is reported as unfinished") {
  TaskSystem ts({{1, Time(1), Time(2), Time(2), 1}}, SegmentedTask{{Time(5)}, {}, Time(20), Time(20)});
  ReleasePattern rp{{{Time(0), Time(2), Time(4), Time(6)}}, Time(0), {}, {}, {}};
  const SimTrace tr = simulate(ts, rp, Time(4));
  CHECK_FALSE(tr.finished());
  CHECK(tr.horizon == Time(4));
  CHECK(simulate(ts, rp).finished());
}

TEST_CASE("trace invariants, priority compliance and work conservation on random patterns") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 300; ++k) {
    const TaskSystem ts = random_system(rng);
    const ReleasePattern rp = random_pattern(ts, rng);
    const SimTrace tr = simulate(ts, rp);
    REQUIRE(tr.finished());
    const std::size_t m = ts.segment_count();
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(tr.seg_arrival[j] <= tr.seg_finish[j]);
      if (j + 1 < m) CHECK(tr.seg_arrival[j + 1] == tr.seg_finish[j] + rp.susp_durations[j]);
    }
    CHECK(*tr.ss_response == tr.seg_finish.back() - tr.seg_arrival.front());
    check_priority_and_work_conservation(ts, rp, tr);
  }
}

TEST_CASE("longer executions never shorten the response") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 300; ++k) {
    const TaskSystem ts = random_system(rng);
    ReleasePattern rp = random_pattern(ts, rng);
    // Start from half-WCET jobs and raise one job to its WCET.
    rp.hp_exec_times.clear();
    for (std::size_t i = 0; i < ts.hp_count(); ++i)
      rp.hp_exec_times.push_back(std::vector<Time>(rp.hp_releases[i].size(), ts.hp_tasks()[i].wcet / Time(2)));
    const Time base = *response_time_of_pattern(ts, rp);
    for (std::size_t i = 0; i < ts.hp_count(); ++i)
      for (std::size_t j = 0; j < rp.hp_releases[i].size(); ++j) {
        ReleasePattern more = rp;
        more.hp_exec_times[i][j] = ts.hp_tasks()[i].wcet;
        CHECK(*response_time_of_pattern(ts, more) >= base);
      }
  }
}

TEST_CASE("event log tsv") {
  TaskSystem ts({{1, Time(1), Time(4), Time(4), 1}}, SegmentedTask{{Time(1)}, {}, Time(10), Time(10)});
  const SimTrace tr = simulate(ts, ReleasePattern{{{Time(0)}}, Time(0), {}, {}, {}});
  const std::string tsv = events_tsv(tr);
  CHECK(tsv.rfind("time\tevent\ttask\tindex\n", 0) == 0);
  CHECK(tsv.find("finish") != std::string::npos);
  CHECK(simulate(ts, ReleasePattern{{{Time(0)}}, Time(0), {}, {}, {}}).events.size() == tr.events.size());
}
