#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssrta/milp.hpp"
#include "ssrta/model.hpp"

namespace ssrta {

/// Parameters of the counterexample family: q >= 1, m >= 2, 0 < eps < 1/q.
struct GapFamilyParams {
  std::int64_t q = 1;
  std::int64_t m = 2;
  Time eps;

  static GapFamilyParams with_default_eps(std::int64_t q, std::int64_t m);
  void validate() const;
};

/// Three heavy periodic tasks, m light tasks and the segmented task with m
/// segments of 1-eps separated by suspensions of 2q-1. The segmented task's
/// deadline and period equal the light-task period.
TaskSystem build_gap_family(const GapFamilyParams& p);

/// Same construction without the m >= 2 restriction (m light tasks).
TaskSystem gap_interference_system(std::int64_t q, std::int64_t m, const Time& eps);

/// 16qm + (m-1)(2q-1).
Time exact_wcrt_formula(const GapFamilyParams& p);

/// Sum of per-segment responses with every hp task periodic, plus all suspensions.
std::optional<Time> split_bound(const TaskSystem& ts);

/// One fixed point treating all segments and suspensions as a single computation.
std::optional<Time> joint_bound(const TaskSystem& ts);

/// Counts, offsets and response of the pessimistic point for one segment.
struct SegmentPoint {
  std::vector<std::int64_t> N;  // per hp task, priority order
  std::vector<Time> O;
  Time R;
};

SegmentPoint lemma11_witness(const GapFamilyParams& p, std::size_t segment);

/// The pessimistic point repeated over all m segments of build_gap_family(p).
MilpAssignment lemma11_assignment(const GapFamilyParams& p);

/// Single-segment model over the three heavy tasks only, with the
/// last-release slack constraint and no bounds.
MilpModel single_segment_model(const GapFamilyParams& p);

/// The same point restricted to single_segment_model(p).
MilpAssignment single_segment_point(const GapFamilyParams& p);

struct BoundsReport {
  GapFamilyParams params;
  std::vector<Time> ub_seg;
  Time ub_split;
  Time ub_joint;
  Time exact;
  Time milp_lb;
  Time ratio;
  Time threshold;          // (4m+4)/9
  bool threshold_applies;  // q == m
  bool meets_threshold;
  std::optional<bool> full_model_feasible;  // empty ("n/a") when q != m
  std::optional<Time> exact_by_search;
};

BoundsReport ratio_report(const GapFamilyParams& p, bool cross_check_exact = false);

}  // namespace ssrta
