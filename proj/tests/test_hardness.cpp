#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "ssrta/hardness.hpp"
#include "ssrta/rta.hpp"

using namespace ssrta;

namespace {

// Every non-negative integer load vector of length M with sum M*V.
void for_each_load_vector(std::int64_t M, std::int64_t V, const std::function<void(const std::vector<Time>&)>& fn) {
  std::vector<Time> w(static_cast<std::size_t>(M));
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t k, std::int64_t left) {
    if (k + 1 == w.size()) {
      w[k] = Time(left);
      fn(w);
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      w[k] = Time(x);
      rec(k + 1, left - x);
    }
  };
  rec(0, M * V);
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_NOTHROW(PartitionInstance{3, 10, {3, 3, 4, 3, 3, 4, 3, 3, 4}}.validate());
  CHECK_THROWS(PartitionInstance{2, 10, {3, 3, 4, 3, 3, 4}}.validate());
  CHECK_THROWS(PartitionInstance{3, 10, {3, 3, 4, 3, 3, 4, 3, 3}}.validate());
  CHECK_THROWS(PartitionInstance{3, 10, {2, 4, 4, 3, 3, 4, 3, 3, 4}}.validate());
  CHECK_THROWS(PartitionInstance{3, 10, {3, 3, 5, 3, 3, 4, 3, 3, 3}}.validate());
  CHECK_THROWS(PartitionInstance{3, 10, {3, 3, 4, 3, 3, 4, 3, 3, 3}}.validate());
}

TEST_CASE("reduction for M=3, V=4: deadline 95, segments of 5, suspensions 24") {
  PartitionInstance p{3, 4, {1, 1, 2, 1, 1, 2, 1, 1, 2}};
  const TaskSystem ts = build_reduction_unchecked(p, ReductionVariant::Constrained);
  CHECK(ts.hp_count() == 10);
  CHECK(ts.ss_task().deadline == Time(95));
  CHECK(reduction_deadline(p, ReductionVariant::Constrained) == Time(95));
  CHECK(ts.ss_task().comp_segments == std::vector<Time>(3, Time(5)));
  CHECK(ts.ss_task().susp_intervals == std::vector<Time>(2, Time(24)));
  const auto& gadget = ts.hp_tasks()[0];
  CHECK(gadget.wcet == Time(4));
  CHECK(gadget.period == Time(12));
  CHECK(gadget.deadline == Time(4));
  CHECK_THROWS(build_reduction(p, ReductionVariant::Constrained));
}

TEST_CASE("value-task deadlines depend on the parity of M") {
  PartitionInstance even{4, 4, std::vector<std::int64_t>(12, 1)};
  even.values[0] = 2;
  even.values[1] = 2;
  even.values[2] = 2;
  even.values[3] = 2;
  const TaskSystem ts_even = build_reduction_unchecked(even, ReductionVariant::Constrained);
  CHECK(ts_even.hp_tasks()[1].deadline == Time(24));
  PartitionInstance odd{3, 4, {1, 1, 2, 1, 1, 2, 1, 1, 2}};
  const TaskSystem ts_odd = build_reduction_unchecked(odd, ReductionVariant::Constrained);
  CHECK(ts_odd.hp_tasks()[1].deadline == Time(20));
}

TEST_CASE("implicit variant uses deadline-equal periods") {
  PartitionInstance p{3, 10, {3, 3, 4, 3, 3, 4, 3, 3, 4}};
  const TaskSystem ts = build_reduction(p, ReductionVariant::Implicit);
  for (const auto& t : ts.hp_tasks()) CHECK(t.deadline == t.period);
  CHECK(ts.ss_task().deadline == ts.ss_task().period);
  CHECK(parse_reduction_variant(to_string(ReductionVariant::Footnote2V)) == ReductionVariant::Footnote2V);
}

TEST_CASE("all loads equal V reach M(4V+1) and miss") {
  for (std::int64_t V : {3, 5, 10}) {
    const auto e = evaluate_loads(V, std::vector<Time>(4, Time(V)));
    CHECK(e.sum_R == Time(4 * (4 * V + 1)));
    CHECK(e.misses);
  }
}

TEST_CASE("exhaustive loads for M=3, V=6: only the balanced vector misses") {
  const std::int64_t M = 3, V = 6;
  int misses = 0, total = 0;
  for_each_load_vector(M, V, [&](const std::vector<Time>& w) {
    const auto e = evaluate_loads(V, w);
    const bool balanced = w == std::vector<Time>(M, Time(V));
    CHECK(e.misses == balanced);
    if (!balanced) CHECK(e.sum_R <= Time(M * (4 * V + 1) - V));
    misses += e.misses;
    ++total;
  });
  CHECK(misses == 1);
  CHECK(total == 190);
}

TEST_CASE("rebalancing the six-load example") {
  const std::int64_t V = 10;
  const std::vector<Time> w{Time(0), Time(35), Time(4), Time(6), Time(15), Time(0)};
  const auto steps = rebalance_trace(w, V);
  std::vector<Time> sums;
  for (const auto& s : steps) sums.push_back(s.sum_R);
  CHECK(sums == std::vector<Time>{Time(216), Time(216), Time(226), Time(236), Time(246)});
  CHECK(steps.front().X == std::vector<std::size_t>{1, 3, 4, 6});
  CHECK(steps.front().Y == std::vector<std::size_t>{2, 5});
  CHECK(steps.back().w == std::vector<Time>(6, Time(V)));
  CHECK(steps.back().X.empty());
}

TEST_CASE("rebalancing a balanced vector is a single step") {
  const auto steps = rebalance_trace(std::vector<Time>(3, Time(7)), 7);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].sum_R == Time(3 * 29));
  CHECK_THROWS(rebalance_trace({Time(1), Time(2)}, 7));
}

TEST_CASE("rebalancing random loads never lowers the sum") {
  const std::int64_t M = 4, V = 8;
  std::mt19937_64 rng(6);
  for (int k = 0; k < 300; ++k) {
    std::vector<std::int64_t> cut{0, M * V};
    std::uniform_int_distribution<std::int64_t> pos(0, M * V);
    for (int c = 0; c + 1 < M; ++c) cut.push_back(pos(rng));
    std::sort(cut.begin(), cut.end());
    std::vector<Time> w;
    for (std::size_t c = 0; c + 1 < cut.size(); ++c) w.push_back(Time(cut[c + 1] - cut[c]));
    const auto steps = rebalance_trace(w, V);
    for (std::size_t s = 1; s < steps.size(); ++s) CHECK(steps[s].sum_R >= steps[s - 1].sum_R);
    CHECK(steps.back().sum_R == Time(M * (4 * V + 1)));
  }
}

TEST_CASE("3-partition oracle") {
  PartitionInstance yes{3, 10, {3, 4, 3, 3, 3, 4, 4, 3, 3}};
  const auto a = solve_3partition(yes);
  REQUIRE(a);
  CHECK(a->sets.size() == 3);
  for (auto l : a->loads) CHECK(l == 10);
  CHECK(evaluate_partition(yes, *a).misses);
  PartitionInstance no{3, 13, {4, 4, 4, 4, 4, 4, 4, 6, 5}};
  CHECK_FALSE(solve_3partition(no));
  CHECK_FALSE(max_partition_evaluation(no).misses);
  CHECK(max_partition_evaluation(yes).misses);
}

TEST_CASE("planted instances") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto p = plant_yes(3, 12, rng);
    CHECK_NOTHROW(p.validate());
    CHECK(solve_3partition(p));
  }
  const auto no = plant_no(3, 13, rng);
  REQUIRE(no);
  CHECK_NOTHROW(no->validate());
  CHECK_FALSE(solve_3partition(*no));
  // Below 13 every valid instance is a YES instance.
  CHECK_FALSE(plant_no(3, 10, rng, 200));
}

TEST_CASE("end-to-end verdicts agree on planted instances") {
  std::mt19937_64 rng(17);
  const auto yes = verify_theorem1(plant_yes(3, 10, rng));
  CHECK(yes.partition_exists);
  CHECK(yes.evaluation_misses);
  CHECK(yes.exact_misses_constrained);
  CHECK(yes.exact_misses_implicit);
  CHECK(yes.hp_schedulable);
  CHECK(yes.agree);
  const auto no = verify_theorem1(*plant_no(3, 13, rng));
  CHECK_FALSE(no.partition_exists);
  CHECK_FALSE(no.exact_misses_constrained);
  CHECK_FALSE(no.exact_misses_implicit);
  CHECK(no.agree);
}

TEST_CASE("all-equal values form a YES instance that misses") {
  PartitionInstance p{3, 12, std::vector<std::int64_t>(9, 4)};
  REQUIRE_NOTHROW(p.validate());
  const auto r = verify_theorem1(p);
  CHECK(r.partition_exists);
  CHECK(r.exact_misses_constrained);
  CHECK(r.agree);
}
