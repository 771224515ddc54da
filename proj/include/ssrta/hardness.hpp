#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssrta/model.hpp"

namespace ssrta {

/// 3M positive integers with sum M*V, each strictly between V/4 and V/2.
struct PartitionInstance {
  std::int64_t M = 3;
  std::int64_t V = 3;
  std::vector<std::int64_t> values;

  void validate() const;
};

/// M disjoint index triples covering all values; loads are the triple sums.
struct PartitionAssignment {
  std::vector<std::vector<std::size_t>> sets;
  std::vector<std::int64_t> loads;
};

enum class ReductionVariant { Constrained, Implicit, Footnote2V };

std::string to_string(ReductionVariant v);
ReductionVariant parse_reduction_variant(const std::string& text);

/// Task system whose lowest-priority task misses its deadline exactly when
/// the instance admits a 3-partition. Task 1 is the periodic (V, 3V) gadget,
/// tasks 2..3M+1 carry the values, the segmented task has M segments of V+1.
TaskSystem build_reduction(const PartitionInstance& p, ReductionVariant variant);

/// Same construction checking only positivity and the sum; used for small
/// V where no value satisfies the strict bounds.
TaskSystem build_reduction_unchecked(const PartitionInstance& p, ReductionVariant variant);

/// D of the segmented task for the given variant.
Time reduction_deadline(const PartitionInstance& p, ReductionVariant variant);

struct PartitionEvaluation {
  Time sum_R;
  bool misses = false;
};

PartitionEvaluation evaluate_partition(const PartitionInstance& p, const PartitionAssignment& a);

/// Same evaluation on a bare load vector.
PartitionEvaluation evaluate_loads(std::int64_t V, const std::vector<Time>& loads);

struct RebalanceStep {
  std::vector<Time> w;
  Time sum_R;
  std::vector<std::size_t> X;  // 1-based indices with w < V after the step
  std::vector<std::size_t> Y;  // 1-based indices with w > V after the step
  std::optional<std::size_t> raised;  // entry set to V by the step
  std::vector<std::size_t> drained;   // entries reduced by the step
};

/// Replays the load-rebalancing argument: loads above 2V are drained first,
/// then every load below V is raised to V from loads above V. Each step's
/// sum of responses is nondecreasing and the last step has all loads equal V.
std::vector<RebalanceStep> rebalance_trace(const std::vector<Time>& w, std::int64_t V);

/// Exhaustive search for a 3-partition; requires M <= 5.
std::optional<PartitionAssignment> solve_3partition(const PartitionInstance& p);

/// Largest sum of responses over all assignments of values to M sets
/// (sets of any size), and whether it exceeds the miss threshold.
PartitionEvaluation max_partition_evaluation(const PartitionInstance& p);

PartitionInstance plant_yes(std::int64_t M, std::int64_t V, std::mt19937_64& rng);
/// Returns nullopt when no NO instance could be produced for (M, V).
std::optional<PartitionInstance> plant_no(std::int64_t M, std::int64_t V, std::mt19937_64& rng,
                                          int attempts = 2000);

struct Theorem1Report {
  bool partition_exists = false;
  bool evaluation_misses = false;
  bool exact_misses_constrained = false;
  bool exact_misses_implicit = false;
  bool exact_misses_footnote = false;
  bool exact_conclusive = true;  // false when the search hit its cap
  bool hp_schedulable = true;
  bool agree = false;
  std::string detail;
};

/// Cross-checks the 3-partition oracle, the load evaluation and the exact
/// search on the reductions (constrained and implicit). Requires M <= 4.
Theorem1Report verify_theorem1(const PartitionInstance& p);

}  // namespace ssrta
