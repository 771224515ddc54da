#include "ssrta/gap.hpp"

#include <stdexcept>

#include "ssrta/exact.hpp"
#include "ssrta/rta.hpp"

namespace ssrta {

GapFamilyParams GapFamilyParams::with_default_eps(std::int64_t q, std::int64_t m) {
  return {q, m, Time(1, 2 * q)};
}

void GapFamilyParams::validate() const {
  if (q < 1) throw ModelError("gap family: q >= 1 required");
  if (m < 2) throw ModelError("gap family: m >= 2 required");
  if (eps <= Time(0) || eps >= Time(1, q)) throw ModelError("gap family: 0 < eps < 1/q required");
}

TaskSystem gap_interference_system(std::int64_t q, std::int64_t m, const Time& eps) {
  if (q < 1 || m < 1) throw ModelError("gap family: q >= 1 and m >= 1 required");
  if (eps <= Time(0) || eps >= Time(1, q)) throw ModelError("gap family: 0 < eps < 1/q required");
  const Time susp(2 * q - 1);
  const Time light_period = Time(16 * q * m * m + (m - 1) * (2 * q - 1));
  std::vector<SporadicTask> hp;
  hp.push_back({1, Time(1), Time(2), Time(2), 1});
  hp.push_back({2, Time(q), Time(4 * q), Time(4 * q), 2});
  hp.push_back({3, Time(2 * q - 1) + eps, Time(8 * q), Time(8 * q), 3});
  for (std::int64_t k = 0; k < m; ++k) {
    int id = static_cast<int>(4 + k);
    hp.push_back({id, Time(1) - eps, light_period, Time(8 * q * m), id});
  }
  SegmentedTask ss;
  ss.comp_segments.assign(static_cast<std::size_t>(m), Time(1) - eps);
  ss.susp_intervals.assign(static_cast<std::size_t>(m - 1), susp);
  ss.deadline = light_period;
  ss.period = light_period;
  return TaskSystem(std::move(hp), std::move(ss));
}

TaskSystem build_gap_family(const GapFamilyParams& p) {
  p.validate();
  return gap_interference_system(p.q, p.m, p.eps);
}

Time exact_wcrt_formula(const GapFamilyParams& p) {
  p.validate();
  return Time(16 * p.q * p.m + (p.m - 1) * (2 * p.q - 1));
}

std::optional<Time> split_bound(const TaskSystem& ts) {
  auto spec = InterferenceSpec::all_periodic(ts);
  Time total = ts.ss_task().total_suspension();
  for (std::size_t j = 0; j < ts.segment_count(); ++j) {
    auto r = segment_response(ts, j, spec);
    if (!r.converged) return std::nullopt;
    total += r.value;
  }
  return total;
}

std::optional<Time> joint_bound(const TaskSystem& ts) {
  const auto& hp = ts.hp_tasks();
  if (hp_utilization(ts, ts.hp_count()) >= Time(1)) return std::nullopt;
  const Time base = ts.ss_task().total_computation() + ts.ss_task().total_suspension();
  Time t = base;
  for (;;) {
    Time next = base;
    for (const auto& task : hp) next += Time(ceil_div(t, task.period)) * task.wcet;
    if (next == t) return t;
    t = next;
  }
}

SegmentPoint lemma11_witness(const GapFamilyParams& p, std::size_t segment) {
  p.validate();
  if (segment >= static_cast<std::size_t>(p.m)) throw std::out_of_range("segment index out of range");
  const std::int64_t q = p.q;
  SegmentPoint pt;
  pt.R = Time(8 * q * q + 6 * q + 1) + Time(q) * p.eps;
  pt.N = {4 * q * q + 3 * q + 1, 2 * q + 2, q + 1};
  pt.O = {Time(0), p.eps / Time(4), p.eps / Time(2)};
  for (std::int64_t k = 0; k < p.m; ++k) {
    pt.N.push_back(0);
    pt.O.push_back(Time(0));
  }
  return pt;
}

MilpAssignment lemma11_assignment(const GapFamilyParams& p) {
  p.validate();
  const std::size_t n = static_cast<std::size_t>(p.m + 3);
  const std::size_t m = static_cast<std::size_t>(p.m);
  MilpAssignment a;
  a.N.assign(n, std::vector<std::int64_t>(m));
  a.O.assign(n, std::vector<Time>(m));
  for (std::size_t j = 0; j < m; ++j) {
    auto pt = lemma11_witness(p, j);
    a.R.push_back(pt.R);
    for (std::size_t i = 0; i < n; ++i) {
      a.N[i][j] = pt.N[i];
      a.O[i][j] = pt.O[i];
    }
  }
  return a;
}

MilpModel single_segment_model(const GapFamilyParams& p) {
  p.validate();
  const std::int64_t q = p.q;
  std::vector<SporadicTask> hp;
  hp.push_back({1, Time(1), Time(2), Time(2), 1});
  hp.push_back({2, Time(q), Time(4 * q), Time(4 * q), 2});
  hp.push_back({3, Time(2 * q - 1) + p.eps, Time(8 * q), Time(8 * q), 3});
  SegmentedTask ss;
  ss.comp_segments = {Time(1) - p.eps};
  const Time horizon(16 * q * p.m * p.m + (p.m - 1) * (2 * q - 1));
  ss.deadline = horizon;
  ss.period = horizon;
  return build_model(TaskSystem(std::move(hp), std::move(ss)), MilpVariant::NoBounds);
}

MilpAssignment single_segment_point(const GapFamilyParams& p) {
  auto pt = lemma11_witness(p, 0);
  MilpAssignment a;
  a.R = {pt.R};
  for (std::size_t i = 0; i < 3; ++i) {
    a.N.push_back({pt.N[i]});
    a.O.push_back({pt.O[i]});
  }
  return a;
}

BoundsReport ratio_report(const GapFamilyParams& p, bool cross_check_exact) {
  p.validate();
  const TaskSystem ts = build_gap_family(p);
  BoundsReport rep;
  rep.params = p;
  auto spec = InterferenceSpec::all_periodic(ts);
  for (std::size_t j = 0; j < ts.segment_count(); ++j) {
    auto r = segment_response(ts, j, spec);
    if (!r.converged) throw std::runtime_error("gap family: segment bound diverged");
    rep.ub_seg.push_back(r.value);
  }
  auto split = split_bound(ts);
  auto joint = joint_bound(ts);
  if (!split || !joint) throw std::runtime_error("gap family: bounds diverged");
  rep.ub_split = *split;
  rep.ub_joint = *joint;
  rep.exact = exact_wcrt_formula(p);

  const std::int64_t q = p.q, m = p.m;
  rep.milp_lb = Time((m - 1) * (2 * q - 1)) + Time(m) * (Time(8 * q * q + 6 * q + 1) + Time(q) * p.eps);
  rep.ratio = rep.milp_lb / rep.exact;
  rep.threshold = Time(4 * m + 4, 9);
  rep.threshold_applies = q == m;
  rep.meets_threshold = rep.ratio >= rep.threshold;
  if (q == m) {
    MilpModel full = build_model(ts, MilpVariant::Full, MilpBounds{rep.ub_seg, rep.ub_split});
    rep.full_model_feasible = check_assignment(full, lemma11_assignment(p)).feasible;
  }
  if (cross_check_exact) {
    auto ex = exact_wcrt(ts);
    if (ex.status == ExactStatus::Exact) rep.exact_by_search = ex.wcrt;
  }
  return rep;
}

}  // namespace ssrta
