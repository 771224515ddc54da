#include "ssrta/hardness.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ssrta/exact.hpp"
#include "ssrta/rta.hpp"

namespace ssrta {

void PartitionInstance::validate() const {
  if (M < 3) throw ModelError("3-partition: M >= 3 required");
  if (V < 3) throw ModelError("3-partition: V >= 3 required");
  if (values.size() != static_cast<std::size_t>(3 * M))
    throw ModelError("3-partition: expected " + std::to_string(3 * M) + " values, got " +
                     std::to_string(values.size()));
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::int64_t v = values[k];
    // V/4 < v < V/2 in integers: 4v > V and 2v < V.
    if (v < 1 || 4 * v <= V || 2 * v >= V)
      throw ModelError("3-partition: value " + std::to_string(v) + " (index " + std::to_string(k + 2) +
                       ") violates V/4 < v < V/2 for V=" + std::to_string(V));
    sum += v;
  }
  if (sum != M * V) throw ModelError("3-partition: values sum to " + std::to_string(sum) + ", expected M*V=" + std::to_string(M * V));
}

std::string to_string(ReductionVariant v) {
  switch (v) {
    case ReductionVariant::Constrained: return "constrained";
    case ReductionVariant::Implicit: return "implicit";
    case ReductionVariant::Footnote2V: return "footnote-2V";
  }
  return "unknown";
}

ReductionVariant parse_reduction_variant(const std::string& text) {
  if (text == "constrained") return ReductionVariant::Constrained;
  if (text == "implicit") return ReductionVariant::Implicit;
  if (text == "footnote-2V" || text == "footnote-2v") return ReductionVariant::Footnote2V;
  throw std::invalid_argument("unknown reduction variant '" + text + "' (expected constrained|implicit|footnote-2V)");
}

Time reduction_deadline(const PartitionInstance& p, ReductionVariant variant) {
  const std::int64_t M = p.M, V = p.V;
  if (variant == ReductionVariant::Footnote2V) return Time(6 * M * V + M - 3 * V);
  return Time(10 * M * V + M - 7 * V);
}

TaskSystem build_reduction_unchecked(const PartitionInstance& p, ReductionVariant variant) {
  const std::int64_t M = p.M, V = p.V;
  if (M < 1 || V < 1) throw ModelError("reduction: M and V must be positive");
  if (p.values.size() != static_cast<std::size_t>(3 * M)) throw ModelError("reduction: expected 3M values");
  if (std::accumulate(p.values.begin(), p.values.end(), std::int64_t{0}) != M * V)
    throw ModelError("reduction: values must sum to M*V");

  const Time dn = reduction_deadline(p, variant);
  std::vector<SporadicTask> hp;
  const bool implicit = variant == ReductionVariant::Implicit;
  hp.push_back({1, Time(V), Time(3 * V), implicit ? Time(3 * V) : Time(V), 1});
  Time di = (M % 2 == 0) ? Time(3 * M * V, 2) : Time(3 * M * V + V, 2);
  Time ti(21 * M * V);
  if (implicit) di = ti = dn;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    if (p.values[k] < 1) throw ModelError("reduction: values must be positive");
    int id = static_cast<int>(k + 2);
    hp.push_back({id, Time(p.values[k]), ti, di, id});
  }
  SegmentedTask ss;
  ss.comp_segments.assign(static_cast<std::size_t>(M), Time(V + 1));
  ss.susp_intervals.assign(static_cast<std::size_t>(M - 1),
                           variant == ReductionVariant::Footnote2V ? Time(2 * V) : Time(6 * V));
  ss.deadline = dn;
  ss.period = implicit ? dn : Time(21 * M * V);
  return TaskSystem(std::move(hp), std::move(ss));
}

TaskSystem build_reduction(const PartitionInstance& p, ReductionVariant variant) {
  p.validate();
  return build_reduction_unchecked(p, variant);
}

PartitionEvaluation evaluate_loads(std::int64_t V, const std::vector<Time>& loads) {
  PartitionEvaluation ev;
  for (const auto& w : loads) ev.sum_R += r_of_w(V, w);
  const std::int64_t M = static_cast<std::int64_t>(loads.size());
  ev.misses = ev.sum_R > Time(M * (4 * V + 1) - V);
  return ev;
}

PartitionEvaluation evaluate_partition(const PartitionInstance& p, const PartitionAssignment& a) {
  if (a.sets.size() != static_cast<std::size_t>(p.M)) throw std::invalid_argument("assignment needs M sets");
  std::vector<bool> used(p.values.size(), false);
  std::vector<Time> loads;
  for (const auto& set : a.sets) {
    std::int64_t w = 0;
    for (std::size_t idx : set) {
      if (idx >= p.values.size() || used[idx]) throw std::invalid_argument("assignment sets must be a disjoint cover");
      used[idx] = true;
      w += p.values[idx];
    }
    loads.push_back(Time(w));
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw std::invalid_argument("assignment sets must cover every value");
  return evaluate_loads(p.V, loads);
}

namespace {

std::vector<std::size_t> indices_where(const std::vector<Time>& w, const std::function<bool(const Time&)>& pred) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (pred(w[k])) out.push_back(k + 1);
  return out;
}

}  // namespace

std::vector<RebalanceStep> rebalance_trace(const std::vector<Time>& w_in, std::int64_t V) {
  const Time v(V);
  std::vector<Time> w = w_in;
  Time total;
  for (const auto& x : w) {
    if (x < Time(0)) throw std::invalid_argument("loads must be non-negative");
    total += x;
  }
  if (total != Time(static_cast<std::int64_t>(w.size()) * V)) throw std::invalid_argument("loads must sum to M*V");

  std::vector<RebalanceStep> steps;
  auto record = [&](std::optional<std::size_t> raised, std::vector<std::size_t> drained) {
    RebalanceStep s;
    s.w = w;
    s.sum_R = evaluate_loads(V, w).sum_R;
    s.X = indices_where(w, [&](const Time& x) { return x < v; });
    s.Y = indices_where(w, [&](const Time& x) { return x > v; });
    s.raised = raised;
    s.drained = std::move(drained);
    steps.push_back(std::move(s));
  };
  auto smallest_below = [&]() {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] < v && (!best || w[k] < w[*best])) best = k;
    return best;
  };

  record(std::nullopt, {});
  // Drain loads above 2V.
  for (;;) {
    std::optional<std::size_t> big;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w[k] > Time(2 * V)) {
        big = k;
        break;
      }
    if (!big) break;
    auto low = smallest_below();
    if (!low) throw std::logic_error("rebalance: load above 2V without a load below V");
    w[*big] -= v - w[*low];
    w[*low] = v;
    record(*low + 1, {*big + 1});
  }
  // Raise each load below V from loads above V, in index order.
  for (;;) {
    auto low = smallest_below();
    if (!low) break;
    Time need = v - w[*low];
    std::vector<std::size_t> drained;
    for (std::size_t k = 0; k < w.size() && need > Time(0); ++k) {
      if (w[k] <= v) continue;
      Time take = std::min(need, w[k] - v);
      w[k] -= take;
      need -= take;
      drained.push_back(k + 1);
    }
    if (need > Time(0)) throw std::logic_error("rebalance: not enough excess to raise a load");
    w[*low] = v;
    record(*low + 1, std::move(drained));
  }
  return steps;
}

namespace {

bool search_triples(const PartitionInstance& p, std::vector<bool>& used, std::vector<std::vector<std::size_t>>& sets) {
  const std::size_t n = p.values.size();
  std::size_t a = 0;
  while (a < n && used[a]) ++a;
  if (a == n) return true;
  used[a] = true;
  for (std::size_t b = a + 1; b < n; ++b) {
    if (used[b]) continue;
    used[b] = true;
    for (std::size_t c = b + 1; c < n; ++c) {
      if (used[c] || p.values[a] + p.values[b] + p.values[c] != p.V) continue;
      used[c] = true;
      sets.push_back({a, b, c});
      if (search_triples(p, used, sets)) return true;
      sets.pop_back();
      used[c] = false;
    }
    used[b] = false;
  }
  used[a] = false;
  return false;
}

}  // namespace

std::optional<PartitionAssignment> solve_3partition(const PartitionInstance& p) {
  p.validate();
  if (p.M > 5) throw std::invalid_argument("solve_3partition: M <= 5 required for exhaustive search");
  std::vector<bool> used(p.values.size(), false);
  PartitionAssignment a;
  if (!search_triples(p, used, a.sets)) return std::nullopt;
  for (const auto& s : a.sets) a.loads.push_back(p.values[s[0]] + p.values[s[1]] + p.values[s[2]]);
  return a;
}

PartitionEvaluation max_partition_evaluation(const PartitionInstance& p) {
  // Reachable sorted load vectors after assigning a prefix of the values.
  std::set<std::vector<std::int64_t>> states{std::vector<std::int64_t>(static_cast<std::size_t>(p.M), 0)};
  for (std::int64_t v : p.values) {
    std::set<std::vector<std::int64_t>> next;
    for (const auto& s : states) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (j > 0 && s[j] == s[j - 1]) continue;
        auto t = s;
        t[j] += v;
        std::sort(t.begin(), t.end());
        next.insert(std::move(t));
      }
    }
    states = std::move(next);
  }
  PartitionEvaluation best;
  bool first = true;
  for (const auto& s : states) {
    std::vector<Time> loads(s.begin(), s.end());
    auto ev = evaluate_loads(p.V, loads);
    if (first || ev.sum_R > best.sum_R) best = ev;
    first = false;
  }
  return best;
}

namespace {

std::int64_t lo_value(std::int64_t V) { return V / 4 + 1; }          // smallest v with 4v > V
std::int64_t hi_value(std::int64_t V) { return (V - 1) / 2; }        // largest v with 2v < V

}  // namespace

PartitionInstance plant_yes(std::int64_t M, std::int64_t V, std::mt19937_64& rng) {
  const std::int64_t lo = lo_value(V), hi = hi_value(V);
  std::vector<std::array<std::int64_t, 3>> triples;
  for (std::int64_t a = lo; a <= hi; ++a)
    for (std::int64_t b = a; b <= hi; ++b) {
      std::int64_t c = V - a - b;
      if (c >= b && c <= hi) triples.push_back({a, b, c});
    }
  if (triples.empty()) throw ModelError("no valid triple sums to V=" + std::to_string(V));
  PartitionInstance p{M, V, {}};
  std::uniform_int_distribution<std::size_t> pick(0, triples.size() - 1);
  for (std::int64_t k = 0; k < M; ++k) {
    const auto& t = triples[pick(rng)];
    p.values.insert(p.values.end(), t.begin(), t.end());
  }
  std::shuffle(p.values.begin(), p.values.end(), rng);
  p.validate();
  return p;
}

std::optional<PartitionInstance> plant_no(std::int64_t M, std::int64_t V, std::mt19937_64& rng, int attempts) {
  const std::int64_t lo = lo_value(V), hi = hi_value(V);
  if (lo > hi) return std::nullopt;
  const std::size_t n = static_cast<std::size_t>(3 * M);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  for (int at = 0; at < attempts; ++at) {
    PartitionInstance p;
    try {
      p = plant_yes(M, V, rng);
    } catch (const ModelError&) {
      return std::nullopt;
    }
    // Shift one value up and another down so the sum is preserved.
    std::size_t a = idx(rng), b = idx(rng);
    if (a == b || p.values[a] + 1 > hi || p.values[b] - 1 < lo) continue;
    p.values[a] += 1;
    p.values[b] -= 1;
    if (!solve_3partition(p)) return p;
  }
  return std::nullopt;
}

Theorem1Report verify_theorem1(const PartitionInstance& p) {
  p.validate();
  if (p.M > 4) throw std::invalid_argument("verify_theorem1: M <= 4 required");
  Theorem1Report rep;
  rep.partition_exists = solve_3partition(p).has_value();
  rep.evaluation_misses = max_partition_evaluation(p).misses;

  auto exact_misses = [&](ReductionVariant variant, bool& out) {
    const TaskSystem ts = build_reduction(p, variant);
    for (const auto& t : ts.hp_tasks())
      if (wcrt_ordinary(ts, t.id).status != OrdinaryStatus::Schedulable) rep.hp_schedulable = false;
    auto ex = exact_wcrt(ts);
    const Time d = ts.ss_task().deadline;
    switch (ex.status) {
      case ExactStatus::DeadlineMiss: out = true; break;
      case ExactStatus::Exact: out = ex.wcrt > d; break;
      case ExactStatus::CapExceeded:
        out = ex.wcrt > d;
        if (!out) rep.exact_conclusive = false;
        break;
    }
    rep.detail += to_string(variant) + ": " + to_string(ex.status) + " " + ex.wcrt.str() + " vs D=" + d.str() + "; ";
  };
  exact_misses(ReductionVariant::Constrained, rep.exact_misses_constrained);
  exact_misses(ReductionVariant::Implicit, rep.exact_misses_implicit);
  exact_misses(ReductionVariant::Footnote2V, rep.exact_misses_footnote);

  const bool v = rep.partition_exists;
  rep.agree = rep.exact_conclusive && rep.hp_schedulable && rep.evaluation_misses == v &&
              rep.exact_misses_constrained == v && rep.exact_misses_implicit == v && rep.exact_misses_footnote == v;
  return rep;
}

}  // namespace ssrta
