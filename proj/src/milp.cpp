#include "ssrta/milp.hpp"

#include <algorithm>
#include <stdexcept>

#include "ssrta/gap.hpp"
#include "ssrta/rta.hpp"

namespace ssrta {

std::string to_string(MilpVariant v) {
  switch (v) {
    case MilpVariant::Full: return "full";
    case MilpVariant::NoBounds: return "no-bounds";
    case MilpVariant::NoRel: return "no-rel";
    case MilpVariant::V1: return "v1";
  }
  return "unknown";
}

MilpVariant parse_variant(const std::string& text) {
  if (text == "full") return MilpVariant::Full;
  if (text == "no-bounds") return MilpVariant::NoBounds;
  if (text == "no-rel") return MilpVariant::NoRel;
  if (text == "v1") return MilpVariant::V1;
  throw std::invalid_argument("unknown MILP variant '" + text + "' (expected full|no-bounds|no-rel|v1)");
}

std::string to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::SegmentDemand: return "segment-demand";
    case ConstraintKind::OffsetNonNeg: return "offset-nonneg";
    case ConstraintKind::OffsetChain: return "offset-chain";
    case ConstraintKind::JobCount: return "job-count";
    case ConstraintKind::SegmentBound: return "segment-bound";
    case ConstraintKind::TotalBound: return "total-bound";
    case ConstraintKind::ReleaseSlack: return "release-slack";
    case ConstraintKind::ArrivalChain: return "arrival-chain";
    case ConstraintKind::ReleaseAfterArrival: return "release-after-arrival";
    case ConstraintKind::FinishDemand: return "finish-demand";
    case ConstraintKind::ReleaseSpacing: return "release-spacing";
  }
  return "unknown";
}

std::string to_string(SolveStatus s) { return s == SolveStatus::Optimal ? "optimal" : "lower-bound"; }

bool CheckReport::holds(ConstraintKind k) const {
  return std::all_of(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return v.kind != k || v.ok; });
}

std::optional<Verdict> CheckReport::first_violation() const {
  for (const auto& v : verdicts)
    if (!v.ok) return v;
  return std::nullopt;
}

Time default_gamma(const TaskSystem& ts) {
  std::optional<Time> smallest;
  auto consider = [&](const Time& t) {
    if (t > Time(0) && (!smallest || t < *smallest)) smallest = t;
  };
  for (const auto& t : ts.hp_tasks()) {
    consider(t.wcet);
    consider(t.period);
    consider(t.deadline);
  }
  for (const auto& c : ts.ss_task().comp_segments) consider(c);
  for (const auto& s : ts.ss_task().susp_intervals) consider(s);
  return *smallest / Time(1000);
}

MilpModel build_model(const TaskSystem& ts, MilpVariant variant, std::optional<MilpBounds> bounds) {
  MilpModel model{ts, variant, true, true, true, {}, Time(), Time()};
  model.variant = variant;
  model.include_seg_ub = variant == MilpVariant::Full || variant == MilpVariant::NoRel;
  model.include_total_ub = model.include_seg_ub;
  model.include_rel = variant == MilpVariant::Full || variant == MilpVariant::NoBounds;
  model.gamma = default_gamma(ts);
  const bool need = model.include_seg_ub;

  if (bounds) {
    if (bounds->ub_seg.size() != ts.segment_count())
      throw std::invalid_argument("bounds list " + std::to_string(bounds->ub_seg.size()) + " segment values, model has " +
                                  std::to_string(ts.segment_count()));
    model.ub_seg = bounds->ub_seg;
    model.ub_total = bounds->ub_total;
  } else {
    auto spec = InterferenceSpec::all_periodic(ts);
    bool ok = true;
    for (std::size_t j = 0; j < ts.segment_count(); ++j) {
      auto r = segment_response(ts, j, spec);
      if (!r.converged) {
        ok = false;
        break;
      }
      model.ub_seg.push_back(r.value);
    }
    if (ok) {
      auto split = split_bound(ts);
      ok = split.has_value();
      if (ok) model.ub_total = *split;
    }
    if (!ok) {
      model.ub_seg.clear();
      if (need) throw ModelError("bounds unavailable: all-periodic segment response diverges (utilization >= 1)");
    }
  }
  if (!model.ub_seg.empty()) {
    for (std::size_t j = 0; j < ts.segment_count(); ++j)
      if (model.ub_seg[j] < ts.ss_task().comp_segments[j])
        throw ModelError("segment bound " + std::to_string(j + 1) + " below the segment WCET");
    if (model.ub_total < ts.ss_task().total_computation() + ts.ss_task().total_suspension())
      throw ModelError("total bound below the zero-interference response");
  }
  return model;
}

Time MilpAssignment::rel(const TaskSystem& ts, std::size_t i, std::size_t j) const {
  return O[i][j] + Time(N[i][j] - 1) * ts.hp_tasks()[i].period;
}

namespace {

void check_dims(const TaskSystem& ts, const MilpAssignment& a) {
  const std::size_t n = ts.hp_count(), m = ts.segment_count();
  if (a.R.size() != m) throw std::invalid_argument("assignment has " + std::to_string(a.R.size()) + " responses, model has " + std::to_string(m) + " segments");
  if (a.N.size() != n || a.O.size() != n)
    throw std::invalid_argument("assignment rows do not match the " + std::to_string(n) + " hp tasks");
  for (std::size_t i = 0; i < n; ++i)
    if (a.N[i].size() != m || a.O[i].size() != m)
      throw std::invalid_argument("assignment row for task " + std::to_string(ts.hp_tasks()[i].id) + " has wrong length");
}

}  // namespace

V1Assignment to_v1(const TaskSystem& ts, const MilpAssignment& a) {
  check_dims(ts, a);
  const std::size_t n = ts.hp_count(), m = ts.segment_count();
  V1Assignment v;
  v.N = a.N;
  v.r.assign(n, std::vector<Time>(m));
  Time g;
  for (std::size_t j = 0; j < m; ++j) {
    v.g.push_back(g);
    v.f.push_back(g + a.R[j]);
    for (std::size_t i = 0; i < n; ++i) v.r[i][j] = g + a.O[i][j];
    if (j + 1 < m) g = v.f[j] + ts.ss_task().susp_intervals[j];
  }
  return v;
}

MilpAssignment from_v1(const TaskSystem& ts, const V1Assignment& v) {
  const std::size_t n = ts.hp_count(), m = ts.segment_count();
  if (v.g.size() != m || v.f.size() != m || v.r.size() != n || v.N.size() != n)
    throw std::invalid_argument("v1 assignment dimensions do not match the model");
  MilpAssignment a;
  a.N = v.N;
  a.O.assign(n, std::vector<Time>(m));
  for (std::size_t j = 0; j < m; ++j) {
    a.R.push_back(v.f[j] - v.g[j]);
    for (std::size_t i = 0; i < n; ++i) {
      if (v.r[i].size() != m) throw std::invalid_argument("v1 release row has wrong length");
      a.O[i][j] = v.r[i][j] - v.g[j];
    }
  }
  return a;
}

CheckReport check_v1(const TaskSystem& ts, const V1Assignment& v) {
  const auto& hp = ts.hp_tasks();
  const auto& ss = ts.ss_task();
  const std::size_t n = ts.hp_count(), m = ts.segment_count();
  if (v.g.size() != m || v.f.size() != m || v.r.size() != n || v.N.size() != n)
    throw std::invalid_argument("v1 assignment dimensions do not match the model");
  CheckReport rep;
  auto add = [&](ConstraintKind k, int task, int seg, bool ok, Time residual) {
    rep.verdicts.push_back({k, task, seg, ok, residual});
    if (!ok) rep.feasible = false;
  };
  for (std::size_t j = 0; j < m; ++j) {
    const int seg = static_cast<int>(j + 1);
    Time expect = j == 0 ? Time(0) : v.f[j - 1] + ss.susp_intervals[j - 1];
    add(ConstraintKind::ArrivalChain, 0, seg, v.g[j] == expect, v.g[j] - expect);
    Time demand = v.g[j] + ss.comp_segments[j];
    for (std::size_t i = 0; i < n; ++i) demand += Time(v.N[i][j]) * hp[i].wcet;
    add(ConstraintKind::FinishDemand, 0, seg, v.f[j] <= demand, demand - v.f[j]);
    for (std::size_t i = 0; i < n; ++i) {
      const int id = hp[i].id;
      Time gap = v.r[i][j] - v.g[j];
      add(ConstraintKind::ReleaseAfterArrival, id, seg, gap >= Time(0), gap);
      const std::int64_t cap = ceil_div(v.f[j] - v.r[i][j], hp[i].period);
      const std::int64_t N = v.N[i][j];
      add(ConstraintKind::JobCount, id, seg, N >= 0 && N <= cap, N < 0 ? Time(N) : Time(cap - N));
      if (j + 1 < m) {
        Time room = (v.r[i][j + 1] - v.r[i][j]) / hp[i].period - Time(N);
        add(ConstraintKind::ReleaseSpacing, id, seg, room >= Time(0), room);
      }
    }
  }
  rep.objective = v.f.back();
  return rep;
}

CheckReport check_assignment(const MilpModel& model, const MilpAssignment& a) {
  const TaskSystem& ts = model.ts;
  check_dims(ts, a);
  if (model.variant == MilpVariant::V1) return check_v1(ts, to_v1(ts, a));

  const auto& hp = ts.hp_tasks();
  const auto& ss = ts.ss_task();
  const std::size_t n = ts.hp_count(), m = ts.segment_count();
  CheckReport rep;
  auto add = [&](ConstraintKind k, int task, int seg, bool ok, Time residual) {
    rep.verdicts.push_back({k, task, seg, ok, residual});
    if (!ok) rep.feasible = false;
  };

  Time total = ss.total_suspension();
  for (std::size_t j = 0; j < m; ++j) {
    const int seg = static_cast<int>(j + 1);
    Time demand = ss.comp_segments[j];
    for (std::size_t i = 0; i < n; ++i) demand += Time(a.N[i][j]) * hp[i].wcet;
    add(ConstraintKind::SegmentDemand, 0, seg, a.R[j] == demand, a.R[j] - demand);
    total += a.R[j];

    for (std::size_t i = 0; i < n; ++i) {
      const int id = hp[i].id;
      const Time& O = a.O[i][j];
      const std::int64_t N = a.N[i][j];
      add(ConstraintKind::OffsetNonNeg, id, seg, O >= Time(0), O);
      if (j + 1 < m) {
        Time slack = a.O[i][j + 1] - (O + Time(N) * hp[i].period - (a.R[j] + ss.susp_intervals[j]));
        add(ConstraintKind::OffsetChain, id, seg, slack >= Time(0), slack);
      }
      const std::int64_t cap = ceil_div(a.R[j] - O, hp[i].period);
      add(ConstraintKind::JobCount, id, seg, N >= 0 && N <= cap, N < 0 ? Time(N) : Time(cap - N));
    }

    if (model.include_seg_ub) {
      Time slack = model.ub_seg.at(j) - a.R[j];
      add(ConstraintKind::SegmentBound, 0, seg, slack >= Time(0), slack);
    }

    if (model.include_rel) {
      // Only tasks with at least one counted job have a last release to test.
      for (std::size_t i = 0; i < n; ++i) {
        if (a.N[i][j] < 1) continue;
        const Time rel = a.rel(ts, i, j);
        Time after = rel;
        for (std::size_t l = 0; l < n; ++l) {
          std::int64_t k = floor_div(a.O[l][j] + Time(a.N[l][j]) * hp[l].period - rel, hp[l].period);
          if (k > 0) after += Time(k) * hp[l].wcet;
        }
        Time slack = a.R[j] - after;
        add(ConstraintKind::ReleaseSlack, hp[i].id, seg, slack > Time(0), slack);
      }
    }
  }
  if (model.include_total_ub) {
    Time slack = model.ub_total - total;
    add(ConstraintKind::TotalBound, 0, 0, slack >= Time(0), slack);
  }
  rep.objective = total;
  return rep;
}

MilpAssignment assignment_from_trace(const TaskSystem& ts, const ReleasePattern& rp, const SimTrace& trace) {
  const auto& hp = ts.hp_tasks();
  const auto& ss = ts.ss_task();
  const std::size_t n = ts.hp_count(), m = ts.segment_count();
  if (trace.seg_finish.size() != m) throw std::invalid_argument("trace does not finish every segment");
  MilpAssignment a;
  a.N.assign(n, std::vector<std::int64_t>(m, 0));
  a.O.assign(n, std::vector<Time>(m));
  for (std::size_t j = 0; j < m; ++j) a.R.push_back(trace.seg_finish[j] - trace.seg_arrival[j]);
  for (std::size_t i = 0; i < n; ++i) {
    Time chain;  // lower bound carried from the previous window
    for (std::size_t j = 0; j < m; ++j) {
      const Time g = trace.seg_arrival[j], f = trace.seg_finish[j];
      std::optional<Time> first;
      std::int64_t count = 0;
      for (const auto& r : rp.hp_releases[i]) {
        if (r >= g && r < f) {
          if (!first) first = r;
          ++count;
        }
      }
      a.N[i][j] = count;
      a.O[i][j] = first ? *first - g : chain;
      if (j + 1 < m) {
        Time next = a.O[i][j] + Time(count) * hp[i].period - (a.R[j] + ss.susp_intervals[j]);
        chain = std::max(Time(0), next);
      }
    }
  }
  return a;
}

}  // namespace ssrta
