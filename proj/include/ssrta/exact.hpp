#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssrta/model.hpp"
#include "ssrta/sim.hpp"

namespace ssrta {

/// How a hp task may release jobs inside one segment window.
enum class OffsetRule {
  ForcedZero,  // released with the segment, then periodic until it finishes
  SingleJob,   // at most one job over the whole segmented job
  Free,
};

std::string to_string(OffsetRule r);

/// Rules for every hp task (priority order) at segment j (0-based).
std::vector<OffsetRule> apply_pruning(const TaskSystem& ts, std::size_t segment);

/// Rules indexed [hp task][segment].
std::vector<std::vector<OffsetRule>> pruning_matrix(const TaskSystem& ts);

struct SearchConfig {
  /// When set, first releases inside each window are also tried at every
  /// multiple of this step past the earliest admissible instant.
  std::optional<Time> offset_grid;
  bool prune = true;
  std::uint64_t cap = 20'000'000;  // candidate window configurations
  unsigned threads = 1;
};

enum class ExactStatus { Exact, DeadlineMiss, CapExceeded };

std::string to_string(ExactStatus s);

struct ExactResult {
  ExactStatus status = ExactStatus::Exact;
  /// Exact: the worst-case response. DeadlineMiss: a response proven above
  /// T_n (a lower bound, for the witness horizon). CapExceeded: best found.
  Time wcrt;
  std::optional<ReleasePattern> witness;
  std::uint64_t explored = 0;
  std::uint64_t states = 0;
  std::string method;  // how release offsets were enumerated
};

/// Exhaustive search over releases confined to the segment windows, maximal
/// suspensions and worst-case execution times. The witness is replayed in the
/// simulator before returning.
ExactResult exact_wcrt(const TaskSystem& ts, const SearchConfig& cfg = {});

}  // namespace ssrta
