// Acceptance run: one PASS/FAIL line per criterion. All comparisons are exact
// rational equalities or inequalities; the only tolerances are wall-clock limits.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "ssrta/exact.hpp"
#include "ssrta/gap.hpp"
#include "ssrta/hardness.hpp"
#include "ssrta/milp.hpp"
#include "ssrta/rta.hpp"
#include "ssrta/sim.hpp"

using namespace ssrta;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void run(const char* label, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
  const bool in_time = secs <= limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s %-6s %s (%.2fs / limit %.0fs)%s\n", pass ? "PASS" : "FAIL", label, o.detail.c_str(), secs, limit_s,
              in_time ? "" : " over time limit");
  std::fflush(stdout);
}

TaskSystem random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(1, 3), md(1, 3), cd(1, 3), td(4, 14), sd(0, 8);
  for (;;) {
    std::vector<SporadicTask> hp;
    Time u;
    const int n = nd(rng);
    for (int i = 1; i <= n; ++i) {
      const int t = td(rng);
      const int c = std::min(cd(rng), t - 1);
      hp.push_back({i, Time(c), Time(t), Time(t), i});
      u += Time(c, t);
    }
    if (u >= Time(9, 10)) continue;
    SegmentedTask ss;
    const int m = md(rng);
    for (int j = 0; j < m; ++j) ss.comp_segments.push_back(Time(cd(rng)));
    for (int j = 0; j + 1 < m; ++j) ss.susp_intervals.push_back(Time(sd(rng)));
    ss.deadline = ss.period = Time(std::uniform_int_distribution<int>(20, 80)(rng));
    return TaskSystem(hp, ss);
  }
}

struct TheoremTally {
  int yes = 0, no = 0, disagreements = 0, hp_unschedulable = 0;
};

TheoremTally tally_theorem1(std::int64_t v_lo, std::int64_t v_hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TheoremTally t;
  auto check = [&](const PartitionInstance& p) {
    const auto r = verify_theorem1(p);
    if (!r.agree) ++t.disagreements;
    if (!r.hp_schedulable) ++t.hp_unschedulable;
    return r.partition_exists;
  };
  for (int k = 0; k < 20; ++k) {
    const std::int64_t V = v_lo + k % (v_hi - v_lo + 1);
    if (check(plant_yes(3, V, rng))) ++t.yes;
  }
  for (std::int64_t V = v_lo; V <= v_hi && t.no < 20; ++V)
    for (int k = 0; k < 6 && t.no < 20; ++k) {
      auto p = plant_no(3, V, rng, 300);
      if (!p) break;
      if (!check(*p)) ++t.no;
    }
  return t;
}

std::string tally_text(const TheoremTally& t) {
  return std::to_string(t.yes) + " YES, " + std::to_string(t.no) + " NO, " + std::to_string(t.disagreements) + " disagreements";
}

}  // namespace

int main() {
  run("[1]", 1, [] {
    const std::int64_t V = 10;
    TaskSystem ts({{1, Time(V), Time(3 * V), Time(V), 1}}, SegmentedTask{{Time(V + 1)}, {}, Time(100000), Time(100000)});
    int mismatches = 0;
    for (std::int64_t w = 0; w <= 50; ++w) {
      InterferenceSpec spec = InterferenceSpec::all_periodic(ts);
      spec.extra_load = Time(w);
      if (segment_response(ts, 0, spec).value != r_of_w(V, Time(w))) ++mismatches;
    }
    const bool spots = r_of_w(V, Time(V)) == Time(4 * V + 1) && r_of_w(V, Time(3 * V - 1)) == Time(6 * V) &&
                       r_of_w(V, Time(3 * V)) == Time(7 * V + 1);
    return Outcome{mismatches == 0 && spots, "closed form vs fixed point, w=0..50: " + std::to_string(mismatches) +
                                                  " mismatches; spot values " + (spots ? "hold" : "differ")};
  });

  run("[2]", 1, [] {
    const auto steps = rebalance_trace({Time(0), Time(35), Time(4), Time(6), Time(15), Time(0)}, 10);
    std::string seq;
    for (const auto& s : steps) seq += (seq.empty() ? "" : " ") + s.sum_R.str();
    return Outcome{seq == "216 216 226 236 246", "rebalance sums: " + seq};
  });

  run("[3]", 10, [] {
    const std::int64_t M = 3, V = 6;
    Time best;
    int at_best = 0, over_gap = 0;
    bool best_balanced = false;
    for (std::int64_t a = 0; a <= M * V; ++a)
      for (std::int64_t b = 0; a + b <= M * V; ++b) {
        const std::vector<Time> w{Time(a), Time(b), Time(M * V - a - b)};
        const Time s = evaluate_loads(V, w).sum_R;
        const bool balanced = a == V && b == V;
        if (!balanced && s > Time(M * (4 * V + 1) - V)) ++over_gap;
        if (s > best) {
          best = s;
          at_best = 1;
          best_balanced = balanced;
        } else if (s == best) {
          ++at_best;
        }
      }
    const bool ok = best == Time(M * (4 * V + 1)) && at_best == 1 && best_balanced && over_gap == 0;
    return Outcome{ok, "max sum " + best.str() + " at " + std::to_string(at_best) + " vector(s); " + std::to_string(over_gap) +
                           " unbalanced vectors above M(4V+1)-V"};
  });

  TheoremTally small;
  run("[4]", 300, [&] {
    small = tally_theorem1(10, 12, 1);
    const bool ok = small.yes >= 20 && small.no >= 20 && small.disagreements == 0;
    return Outcome{ok, "M=3, V<=12: " + tally_text(small) + (small.no < 20 ? "; no valid NO instance exists for V<=12" : "")};
  });

  TheoremTally large;
  run("[4s]", 300, [&] {
    large = tally_theorem1(13, 20, 2);
    const bool ok = large.yes >= 20 && large.no >= 20 && large.disagreements == 0;
    return Outcome{ok, "supplementary, M=3, V in 13..20: " + tally_text(large)};
  });

  run("[5]", 60, [&] {
    int built = 0, bad = 0;
    std::mt19937_64 rng(5);
    for (std::int64_t M : {3, 4})
      for (std::int64_t V : {10, 12, 15}) {
        const auto p = plant_yes(M, V, rng);
        for (auto variant : {ReductionVariant::Constrained, ReductionVariant::Implicit}) {
          const TaskSystem ts = build_reduction(p, variant);
          ++built;
          for (const auto& t : ts.hp_tasks())
            if (wcrt_ordinary(ts, t.id).status != OrdinaryStatus::Schedulable) ++bad;
        }
      }
    bad += small.hp_unschedulable + large.hp_unschedulable;
    return Outcome{bad == 0, std::to_string(built) + " extra reductions plus those of [4]/[4s]: " + std::to_string(bad) +
                                 " unschedulable hp tasks"};
  });

  run("[6]", 1, [] {
    int wrong = 0, cases = 0;
    for (std::int64_t q = 1; q <= 3; ++q)
      for (std::int64_t m = 1; m <= 3; ++m) {
        const TaskSystem ts = gap_interference_system(q, m, Time(1, 2 * q));
        for (std::int64_t x = 1; x <= m + 1; ++x) {
          InterferenceSpec spec;
          spec.periodic = {1, 2, 3};
          for (std::int64_t k = 0; k + 1 < x; ++k) spec.one_shot.insert(static_cast<int>(4 + k));
          const auto r = segment_response(ts, 0, spec);
          ++cases;
          if (!r.converged || r.value != Time(x * 8 * q)) ++wrong;
        }
      }
    return Outcome{wrong == 0, std::to_string(cases) + " (q, m, x) cases, " + std::to_string(wrong) + " differ from x*8q"};
  });

  run("[7]", 120, [] {
    std::string detail;
    bool ok = true;
    for (auto [q, m] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {2, 2}, {1, 3}}) {
      const auto p = GapFamilyParams::with_default_eps(q, m);
      const auto r = exact_wcrt(build_gap_family(p));
      const bool hit = r.status == ExactStatus::Exact && r.wcrt == exact_wcrt_formula(p);
      ok = ok && hit;
      detail += "(" + std::to_string(q) + "," + std::to_string(m) + ")=" + r.wcrt.str() + (hit ? " " : "! ");
    }
    return Outcome{ok, "exact search: " + detail};
  });

  run("[8]", 1, [] {
    std::string detail;
    bool ok = true;
    for (std::int64_t m : {2, 3}) {
      const auto p = GapFamilyParams::with_default_eps(m, m);
      const bool sub = check_assignment(single_segment_model(p), single_segment_point(p)).feasible;
      const TaskSystem ts = build_gap_family(p);
      const auto full_rep = check_assignment(build_model(ts, MilpVariant::Full), lemma11_assignment(p));
      const Time expect = Time((m - 1) * (2 * m - 1)) + Time(m) * (Time(8 * m * m + 6 * m + 1) + Time(m) * p.eps);
      const bool hit = sub && full_rep.feasible && full_rep.objective == expect;
      ok = ok && hit;
      detail += "m=" + std::to_string(m) + " objective " + full_rep.objective.str() + (hit ? " ok; " : " FAILED; ");
    }
    return Outcome{ok, detail};
  });

  run("[9]", 1, [] {
    std::string detail;
    bool ok = true;
    for (std::int64_t m = 2; m <= 6; ++m) {
      const auto rep = ratio_report(GapFamilyParams::with_default_eps(m, m));
      ok = ok && rep.meets_threshold;
      detail += rep.ratio.str() + (rep.meets_threshold ? ">=" : "<") + rep.threshold.str() + " ";
    }
    return Outcome{ok, "ratios m=2..6: " + detail};
  });

  const TaskSystem two({{1, Time(2), Time(4), Time(4), 1}}, SegmentedTask{{Time(2), Time(2)}, {Time(8)}, Time(40), Time(40)});
  run("[10]", 1, [&] {
    const TaskSystem first({{1, Time(2), Time(4), Time(4), 1}}, SegmentedTask{{Time(2)}, {}, Time(40), Time(40)});
    const Time exact_finish = exact_wcrt(first).wcrt;
    const MilpModel model = build_model(two, MilpVariant::NoBounds);
    const auto r = solve(model);
    const bool feasible = check_assignment(model, r.best).feasible;
    const bool ok = exact_finish == Time(4) && feasible && r.best.R[0] == Time(6);
    return Outcome{ok, "exact first-segment finish " + exact_finish.str() + "; no-bounds solve R_1=" + r.best.R[0].str() +
                           " (objective " + r.objective.str() + ")" +
                           (ok ? "" : "; the last-release constraint excludes the point with two jobs in the first window")};
  });

  run("[10s]", 1, [&] {
    const MilpModel model = build_model(two, MilpVariant::V1);
    const auto r = solve(model);
    const bool ok = check_assignment(model, r.best).feasible && r.best.R[0] == Time(6);
    return Outcome{ok, "supplementary, arrival/finish view: R_1=" + r.best.R[0].str() + " (f_1=" + to_v1(two, r.best).f[0].str() + ")"};
  });

  run("[11]", 600, [] {
    std::mt19937_64 rng(11);
    int compared = 0, violations = 0, lower_bounds = 0;
    while (compared < 200) {
      const TaskSystem ts = random_instance(rng);
      const auto ex = exact_wcrt(ts);
      if (ex.status != ExactStatus::Exact) continue;
      const auto r = solve(build_model(ts, MilpVariant::Full));
      if (r.status == SolveStatus::LowerBound) ++lower_bounds;
      if (r.objective < ex.wcrt) ++violations;
      ++compared;
    }
    return Outcome{violations == 0, std::to_string(compared) + " instances, " + std::to_string(violations) +
                                        " with MILP objective below the exact WCRT (" + std::to_string(lower_bounds) +
                                        " solved to a lower bound)"};
  });

  run("[12]", 120, [] {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> nd(1, 5), td(2, 15);
    int sets = 0, mismatches = 0;
    while (sets < 200) {
      std::vector<SporadicTask> hp;
      Time u;
      std::int64_t hyper = 1;
      const int n = nd(rng);
      for (int i = 1; i <= n; ++i) {
        const int t = td(rng);
        const int c = std::uniform_int_distribution<int>(1, std::max(1, t / 2))(rng);
        const int d = std::uniform_int_distribution<int>(c, t)(rng);
        hp.push_back({i, Time(c), Time(t), Time(d), i});
        u += Time(c, t);
        hyper = checked_lcm(hyper, t);
      }
      if (u > Time(1) || hyper > 20000) continue;
      const TaskSystem ts(hp, SegmentedTask{{Time(1)}, {}, Time(hyper * 10), Time(hyper * 10)});
      ReleasePattern rp;
      for (const auto& t : hp) {
        std::vector<Time> rel;
        for (Time at; at < Time(hyper); at += t.period) rel.push_back(at);
        rp.hp_releases.push_back(rel);
      }
      rp.ss_job_release = Time(hyper * 4);
      const SimTrace tr = simulate(ts, rp);
      for (std::size_t i = 0; i < hp.size(); ++i) {
        Time worst;
        for (const auto& r : tr.hp_response[i]) worst = std::max(worst, r.value_or(Time(-1)));
        const auto a = wcrt_ordinary(ts, hp[i].id);
        if (!a.wcrt || *a.wcrt != worst) ++mismatches;
      }
      ++sets;
    }
    return Outcome{mismatches == 0, std::to_string(sets) + " sets, " + std::to_string(mismatches) + " task responses differ"};
  });

  run("[13]", 1, [] {
    std::string detail;
    bool ok = true;
    for (std::int64_t m = 2; m <= 4; ++m) {
      const TaskSystem ts = build_gap_family(GapFamilyParams::with_default_eps(m, m));
      const auto split = split_bound(ts);
      const auto joint = joint_bound(ts);
      const bool hit = split && joint && *joint >= *split && *split == Time(8 * m * m * (m + 1) + (m - 1) * (2 * m - 1));
      ok = ok && hit;
      detail += "m=" + std::to_string(m) + " split " + (split ? split->str() : "-") + " joint " + (joint ? joint->str() : "-") + "; ";
    }
    return Outcome{ok, detail};
  });

  std::printf("%d failing line(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
