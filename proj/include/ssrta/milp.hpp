#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssrta/model.hpp"
#include "ssrta/sim.hpp"

namespace ssrta {

enum class MilpVariant {
  Full,      // segment and total bounds plus the last-release slack constraint
  NoBounds,  // last-release slack constraint, no bounds
  NoRel,     // bounds, no last-release slack constraint
  V1,        // arrival/finish/release view without bounds or slack constraint
};

std::string to_string(MilpVariant v);
MilpVariant parse_variant(const std::string& text);

struct MilpBounds {
  std::vector<Time> ub_seg;
  Time ub_total;
};

struct MilpModel {
  TaskSystem ts;
  MilpVariant variant = MilpVariant::Full;
  bool include_seg_ub = true;
  bool include_total_ub = true;
  bool include_rel = true;
  std::vector<Time> ub_seg;
  Time ub_total;
  Time gamma;  // strictness margin, used only for LP export and offset candidates
};

/// Builds a model of the requested variant. Bounds default to the all-periodic
/// per-segment response and the split bound. Throws if the full variant needs
/// bounds that cannot be computed (periodic utilization >= 1).
MilpModel build_model(const TaskSystem& ts, MilpVariant variant, std::optional<MilpBounds> bounds = {});

/// Default strictness margin: 1/1000 of the smallest nonzero parameter.
Time default_gamma(const TaskSystem& ts);

/// Candidate point in the offset/count/response view. Indexed [hp task][segment].
struct MilpAssignment {
  std::vector<std::vector<std::int64_t>> N;
  std::vector<std::vector<Time>> O;
  std::vector<Time> R;

  /// Last interfering release relative to the segment arrival.
  Time rel(const TaskSystem& ts, std::size_t i, std::size_t j) const;

  friend bool operator==(const MilpAssignment&, const MilpAssignment&) = default;
};

/// The same point in the arrival/finish/release view.
struct V1Assignment {
  std::vector<Time> g;
  std::vector<Time> f;
  std::vector<std::vector<Time>> r;  // first release at or after g_j, [task][segment]
  std::vector<std::vector<std::int64_t>> N;

  friend bool operator==(const V1Assignment&, const V1Assignment&) = default;
};

V1Assignment to_v1(const TaskSystem& ts, const MilpAssignment& a);
MilpAssignment from_v1(const TaskSystem& ts, const V1Assignment& v);

enum class ConstraintKind {
  SegmentDemand,    // R_j equals segment WCET plus counted hp work
  OffsetNonNeg,     // O >= 0
  OffsetChain,      // inter-arrival link between consecutive windows
  JobCount,         // 0 <= N <= ceil((R - O) / T)
  SegmentBound,     // R_j <= UB_seg
  TotalBound,       // S + sum R <= UB_total
  ReleaseSlack,     // work released after the last counted job fits before R_j
  // arrival/finish/release view
  ArrivalChain,     // g_1 = 0, g_j = f_{j-1} + S
  ReleaseAfterArrival,
  FinishDemand,     // f_j <= g_j + segment WCET + counted hp work
  ReleaseSpacing,   // N <= (r_{j+1} - r_j) / T
};

std::string to_string(ConstraintKind k);

struct Verdict {
  ConstraintKind kind;
  int task = 0;     // hp task id, 0 when not task-specific
  int segment = 0;  // 1-based, 0 when not segment-specific
  bool ok = true;
  Time residual;    // slack: >= 0 (or > 0 for strict, == 0 for equality) when satisfied
};

struct CheckReport {
  std::vector<Verdict> verdicts;
  bool feasible = true;
  Time objective;

  bool holds(ConstraintKind k) const;
  std::optional<Verdict> first_violation() const;
};

/// Exact evaluation of every constraint of the model's variant.
/// Throws std::invalid_argument on dimension mismatch.
CheckReport check_assignment(const MilpModel& model, const MilpAssignment& a);

/// Arrival/finish/release view constraints only.
CheckReport check_v1(const TaskSystem& ts, const V1Assignment& v);

struct SolveBudget {
  std::uint64_t max_nodes = 400'000'000;
};

enum class SolveStatus { Optimal, LowerBound };

std::string to_string(SolveStatus s);

struct SolveResult {
  MilpAssignment best;
  Time objective;
  SolveStatus status = SolveStatus::Optimal;
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
  bool used_offset_candidates = false;  // some feasible leaf needed a non-endpoint offset
  bool undecided_leaves = false;        // some leaf rejected without an exhaustive offset check
};

/// Enumerative branch and bound over job counts. Responses follow from the
/// counts; offsets are propagated window by window from their lower bounds.
SolveResult solve(const MilpModel& model, const SolveBudget& budget = {});

/// LP text (CPLEX LP format) for the model, scaled to an integer time unit.
std::string export_lp(const MilpModel& model);

/// Reads back the bound values written by export_lp.
MilpBounds parse_lp_bounds(const std::string& lp_text);

/// Maps a concrete pattern (arrival at 0, maximal suspensions) and its trace
/// to the point the formulation associates with it.
MilpAssignment assignment_from_trace(const TaskSystem& ts, const ReleasePattern& rp, const SimTrace& trace);

}  // namespace ssrta
