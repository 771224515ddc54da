#include "doctest.h"
#include "ssrta/exact.hpp"
#include "ssrta/gap.hpp"
#include "ssrta/milp.hpp"
#include "ssrta/rta.hpp"

using namespace ssrta;

TEST_CASE("gap family construction for q=2, m=2") {
  const auto p = GapFamilyParams::with_default_eps(2, 2);
  CHECK(p.eps == Time(1, 4));
  const TaskSystem ts = build_gap_family(p);
  REQUIRE(ts.hp_count() == 5);
  CHECK(ts.hp_tasks()[2].wcet == Time(13, 4));
  CHECK(ts.hp_tasks()[2].period == Time(16));
  CHECK(ts.hp_tasks()[3].period == Time(131));
  CHECK(ts.hp_tasks()[3].deadline == Time(32));
  CHECK(ts.ss_task().deadline == Time(131));
  CHECK(ts.ss_task().comp_segments == std::vector<Time>(2, Time(3, 4)));
  CHECK(ts.ss_task().susp_intervals == std::vector<Time>{Time(3)});
}

TEST_CASE("gap family parameters are validated") {
  CHECK_THROWS_AS(GapFamilyParams({0, 2, Time(1, 2)}).validate(), ModelError);
  CHECK_THROWS_AS(GapFamilyParams({1, 1, Time(1, 2)}).validate(), ModelError);
  CHECK_THROWS_AS(GapFamilyParams({2, 2, Time(1, 2)}).validate(), ModelError);
  CHECK_THROWS_AS(GapFamilyParams({2, 2, Time(0)}).validate(), ModelError);
  CHECK_NOTHROW(GapFamilyParams({2, 2, Time(49, 100)}).validate());
}

TEST_CASE("every hp task of the gap family is schedulable") {
  for (std::int64_t q = 1; q <= 3; ++q)
    for (std::int64_t m = 2; m <= 4; ++m) {
      const TaskSystem ts = build_gap_family(GapFamilyParams::with_default_eps(q, m));
      for (const auto& t : ts.hp_tasks()) CHECK(wcrt_ordinary(ts, t.id).status == OrdinaryStatus::Schedulable);
    }
}

TEST_CASE("exact formula and analytic bounds") {
  const auto p = GapFamilyParams::with_default_eps(2, 2);
  CHECK(exact_wcrt_formula(p) == Time(67));
  for (std::int64_t q = 1; q <= 4; ++q)
    for (std::int64_t m = 2; m <= 5; ++m) {
      const auto pp = GapFamilyParams::with_default_eps(q, m);
      const TaskSystem ts = build_gap_family(pp);
      const auto split = split_bound(ts);
      const auto joint = joint_bound(ts);
      REQUIRE(split);
      REQUIRE(joint);
      CHECK(*split == Time(m * (m + 1) * 8 * q + (m - 1) * (2 * q - 1)));
      if (q == m) CHECK(*joint >= *split);
      CHECK(*split >= exact_wcrt_formula(pp));
    }
}

TEST_CASE("joint bound is not always the larger one") {
  // With q=1 a suspension of one unit is cheap to count as computation.
  const TaskSystem ts = build_gap_family(GapFamilyParams::with_default_eps(1, 2));
  CHECK(*joint_bound(ts) == Time(48));
  CHECK(*split_bound(ts) == Time(49));
}

TEST_CASE("ratio report") {
  const auto rep = ratio_report(GapFamilyParams::with_default_eps(2, 2), true);
  CHECK(rep.exact == Time(67));
  CHECK(rep.milp_lb == Time(94));
  CHECK(rep.ratio == Time(94, 67));
  CHECK(rep.threshold == Time(4, 3));
  CHECK(rep.threshold_applies);
  REQUIRE(rep.full_model_feasible);
  CHECK(*rep.full_model_feasible);
  REQUIRE(rep.exact_by_search);
  CHECK(*rep.exact_by_search == Time(67));

  const auto off = ratio_report(GapFamilyParams::with_default_eps(3, 2));
  CHECK_FALSE(off.threshold_applies);
  CHECK_FALSE(off.full_model_feasible);
}

TEST_CASE("ratio grows with q for fixed m") {
  Time last;
  for (std::int64_t q = 1; q <= 8; ++q) {
    const auto rep = ratio_report(GapFamilyParams::with_default_eps(q, 2));
    CHECK(rep.ratio > last);
    last = rep.ratio;
  }
}

TEST_CASE("threshold is met along the diagonal") {
  for (std::int64_t m = 2; m <= 6; ++m) {
    const auto rep = ratio_report(GapFamilyParams::with_default_eps(m, m));
    CHECK(rep.meets_threshold);
    REQUIRE(rep.full_model_feasible);
    CHECK(*rep.full_model_feasible);
  }
}

TEST_CASE("pessimistic point with a zero offset for the third task") {
  const auto p = GapFamilyParams::with_default_eps(2, 2);
  auto pt = single_segment_point(p);
  pt.O[2][0] = Time(0);
  const auto rep = check_assignment(single_segment_model(p), pt);
  CHECK(rep.holds(ConstraintKind::SegmentDemand));
  CHECK(rep.holds(ConstraintKind::JobCount));
  CHECK_FALSE(rep.holds(ConstraintKind::ReleaseSlack));
}

TEST_CASE("pessimistic value does not exceed the no-bounds optimum") {
  for (std::int64_t m = 2; m <= 3; ++m) {
    const auto p = GapFamilyParams::with_default_eps(2, m);
    const auto r = solve(build_model(build_gap_family(p), MilpVariant::NoBounds));
    CHECK(ratio_report(p).milp_lb <= r.objective);
  }
}
