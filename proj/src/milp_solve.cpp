// Enumerative branch and bound for the offset/count/response model.
//
// Windows are solved left to right. For fixed counts N the response R is
// fixed by the segment-demand equality, and the only quantity carried to the
// next window is the per-task lower bound on the next offset. States are
// those lower-bound vectors; a state with smaller bounds and a larger partial
// objective dominates, because its set of admissible offsets is a superset.

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "ssrta/milp.hpp"
#include "ticks.hpp"

namespace ssrta {

namespace {

using detail::tick;

struct WindowCandidate {
  std::vector<std::int64_t> N;
  tick R = 0;
};

struct Node {
  std::int64_t parent = -1;
  std::vector<std::int64_t> N;
  std::vector<tick> O;
  tick R = 0;
};

struct State {
  std::vector<tick> L;
  tick objective = 0;
  std::int64_t node = -1;  // last window's node, -1 before the first window
};

class Solver {
public:
  Solver(const MilpModel& model, const SolveBudget& budget)
      : model_(model), budget_(budget), n_(model.ts.hp_count()), m_(model.ts.segment_count()) {
    std::vector<Time> extra{model.gamma};
    if (model.include_seg_ub) extra.insert(extra.end(), model.ub_seg.begin(), model.ub_seg.end());
    if (model.include_total_ub) extra.push_back(model.ub_total);
    ts_ = detail::make_ticks(model.ts, extra);
    gamma_ = ts_.to_ticks(model.gamma);
    use_rel_ = model.include_rel && model.variant != MilpVariant::V1;
    const bool bounded = model.include_seg_ub && model.variant != MilpVariant::V1;
    use_total_ = model.include_total_ub && model.variant != MilpVariant::V1;
    if (use_total_) ub_total_ = ts_.to_ticks(model.ub_total);
    for (std::size_t j = 0; j < m_; ++j) caps_.push_back(bounded ? ts_.to_ticks(model.ub_seg[j]) : utilization_cap(j));
    min_rest_.assign(m_ + 1, 0);
    for (std::size_t j = m_; j-- > 0;) {
      min_rest_[j] = min_rest_[j + 1] + ts_.seg[j];
      if (j + 1 < m_) min_rest_[j] += ts_.susp[j];
    }
  }

  SolveResult run() {
    std::vector<State> layer{State{std::vector<tick>(n_, 0), 0, -1}};
    for (std::size_t j = 0; j + 1 < m_ && !exhausted_; ++j) {
      auto next = advance(j, layer);
      if (next.empty()) break;  // budget ran out before any successor was built
      layer = std::move(next);
    }
    if (exhausted_) return finish_greedily(layer);
    return finish_last(layer);
  }

private:
  const MilpModel& model_;
  SolveBudget budget_;
  std::size_t n_, m_;
  detail::TickSystem ts_;
  tick gamma_ = 1;
  bool use_rel_ = false;
  bool use_total_ = false;
  tick ub_total_ = 0;
  std::vector<tick> caps_;
  std::vector<tick> min_rest_;  // least possible contribution of windows j.. to the objective
  std::vector<Node> nodes_;
  std::uint64_t count_ = 0;
  bool exhausted_ = false;
  bool used_candidates_ = false;
  bool undecided_ = false;

  tick utilization_cap(std::size_t j) const {
    const auto& hp = model_.ts.hp_tasks();
    if (hp.empty()) return ts_.seg[j];
    const Time u = hp_utilization(model_.ts, n_);
    if (u >= Time(1))
      throw ModelError("unbounded N-space: hp utilization " + u.str() + " >= 1 and the model has no segment bounds");
    Time work = model_.ts.ss_task().comp_segments[j];
    for (const auto& t : hp) work += t.wcet;
    // R < work / (1 - U); R is an integer number of ticks.
    const Time limit = work / (Time(1) - u) * Time(ts_.scale);
    return limit.ceil() - 1;
  }

  bool spend() {
    if (++count_ > budget_.max_nodes) exhausted_ = true;
    return !exhausted_;
  }

  std::vector<WindowCandidate> enumerate(std::size_t j) {
    std::vector<WindowCandidate> out;
    const tick cap = caps_[j];
    std::vector<std::int64_t> N(n_, 0);
    auto rec = [&](auto&& self, std::size_t i, tick R) -> void {
      if (exhausted_) return;
      if (i == n_) {
        for (std::size_t k = 0; k < n_; ++k)
          if (N[k] >= 1 && (N[k] - 1) * ts_.T[k] >= R) return;
        out.push_back({N, R});
        return;
      }
      if (!spend()) return;
      for (std::int64_t c = 0;; ++c) {
        const tick r = R + c * ts_.C[i];
        if (r > cap || (c >= 1 && (c - 1) * ts_.T[i] >= cap)) break;
        N[i] = c;
        self(self, i + 1, r);
      }
      N[i] = 0;
    };
    if (ts_.seg[j] <= cap) rec(rec, 0, ts_.seg[j]);
    return out;
  }

  bool release_slack_ok(const std::vector<std::int64_t>& N, const std::vector<tick>& O, tick R) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (N[i] < 1) continue;
      const tick rel = O[i] + (N[i] - 1) * ts_.T[i];
      tick after = rel;
      for (std::size_t l = 0; l < n_; ++l) {
        const tick k = detail::floor_div_tick(O[l] + N[l] * ts_.T[l] - rel, ts_.T[l]);
        if (k > 0) after += k * ts_.C[l];
      }
      if (R <= after) return false;
    }
    return true;
  }

  bool counts_ok(const std::vector<std::int64_t>& N, const std::vector<tick>& O, tick R) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (N[i] >= 1 && (N[i] - 1) * ts_.T[i] + O[i] >= R) return false;
    return true;
  }

  // Offsets for a leaf, or nothing when none of the tried offsets is feasible.
  std::optional<std::vector<tick>> offsets_for(const std::vector<tick>& L, const WindowCandidate& c) {
    if (!counts_ok(c.N, L, c.R)) return std::nullopt;
    if (!use_rel_ || release_slack_ok(c.N, L, c.R)) return L;
    // Screen: every counted task needs R > lowest last release + its WCET.
    for (std::size_t i = 0; i < n_; ++i)
      if (c.N[i] >= 1 && c.R <= L[i] + (c.N[i] - 1) * ts_.T[i] + ts_.C[i]) return std::nullopt;

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n_; ++i)
      if (c.N[i] >= 1) active.push_back(i);
    std::vector<std::size_t> ranks(active.size());
    std::iota(ranks.begin(), ranks.end(), 0);
    auto attempt = [&](const std::vector<std::size_t>& r) -> std::optional<std::vector<tick>> {
      std::vector<tick> O = L;
      for (std::size_t k = 0; k < active.size(); ++k) O[active[k]] += static_cast<tick>(r[k]) * gamma_;
      if (counts_ok(c.N, O, c.R) && release_slack_ok(c.N, O, c.R)) return O;
      return std::nullopt;
    };
    std::optional<std::vector<tick>> found;
    if (active.size() <= 4) {
      do {
        found = attempt(ranks);
      } while (!found && std::next_permutation(ranks.begin(), ranks.end()));
    } else {
      found = attempt(ranks);
      if (!found) {
        std::reverse(ranks.begin(), ranks.end());
        found = attempt(ranks);
      }
    }
    if (found)
      used_candidates_ = true;
    else
      undecided_ = true;
    return found;
  }

  std::int64_t add_node(std::int64_t parent, const WindowCandidate& c, std::vector<tick> O) {
    nodes_.push_back({parent, c.N, std::move(O), c.R});
    return static_cast<std::int64_t>(nodes_.size()) - 1;
  }

  std::vector<State> advance(std::size_t j, const std::vector<State>& layer) {
    const auto cands = enumerate(j);
    std::map<std::vector<tick>, State> next;
    for (const auto& st : layer) {
      for (const auto& c : cands) {
        if (!spend()) break;
        const tick obj = st.objective + c.R + ts_.susp[j];
        if (use_total_ && obj + min_rest_[j + 1] > ub_total_) continue;
        auto O = offsets_for(st.L, c);
        if (!O) continue;
        std::vector<tick> L(n_);
        for (std::size_t i = 0; i < n_; ++i) L[i] = std::max<tick>(0, (*O)[i] + c.N[i] * ts_.T[i] - c.R - ts_.susp[j]);
        auto it = next.find(L);
        if (it != next.end() && it->second.objective >= obj) continue;
        const std::int64_t node = add_node(st.node, c, std::move(*O));
        next[L] = State{L, obj, node};
      }
      if (exhausted_) break;
    }
    return prune_dominated(next);
  }

  static std::vector<State> prune_dominated(const std::map<std::vector<tick>, State>& states) {
    std::vector<State> all;
    all.reserve(states.size());
    for (const auto& [_, s] : states) all.push_back(s);
    std::stable_sort(all.begin(), all.end(), [](const State& a, const State& b) { return a.objective > b.objective; });
    std::vector<State> kept;
    for (auto& s : all) {
      const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const State& k) {
        for (std::size_t i = 0; i < s.L.size(); ++i)
          if (k.L[i] > s.L[i]) return false;
        return true;
      });
      if (!dominated) kept.push_back(std::move(s));
    }
    return kept;
  }

  SolveResult finish_last(const std::vector<State>& layer) {
    const std::size_t j = m_ - 1;
    auto cands = enumerate(j);
    std::stable_sort(cands.begin(), cands.end(), [](const WindowCandidate& a, const WindowCandidate& b) {
      if (a.R != b.R) return a.R > b.R;
      return a.N < b.N;
    });
    std::optional<tick> best;
    std::int64_t best_node = -1;
    for (const auto& st : layer) {
      for (const auto& c : cands) {
        const tick obj = st.objective + c.R;
        if (best && obj <= *best) break;
        if (use_total_ && obj > ub_total_) continue;
        if (!spend()) break;
        auto O = offsets_for(st.L, c);
        if (!O) continue;
        best = obj;
        best_node = add_node(st.node, c, std::move(*O));
        break;
      }
      if (exhausted_) break;
    }
    if (!best) {
      // Every window can always take zero interfering jobs, so reaching here
      // means the budget ran out before any leaf was examined.
      return finish_greedily(layer);
    }
    return assemble(best_node, *best);
  }

  // Completes every state with empty windows; always feasible.
  SolveResult finish_greedily(const std::vector<State>& layer) {
    exhausted_ = true;
    std::optional<tick> best;
    std::int64_t best_node = -1;
    const std::size_t start = layer.empty() || layer.front().node < 0 ? 0 : depth(layer.front().node);
    for (const auto& st : layer) {
      std::vector<tick> L = st.L;
      tick obj = st.objective;
      std::int64_t node = st.node;
      for (std::size_t j = start; j < m_; ++j) {
        WindowCandidate c{std::vector<std::int64_t>(n_, 0), ts_.seg[j]};
        obj += c.R;
        node = add_node(node, c, L);
        if (j + 1 < m_) {
          obj += ts_.susp[j];
          for (auto& l : L) l = std::max<tick>(0, l - c.R - ts_.susp[j]);
        }
      }
      if (!best || obj > *best) {
        best = obj;
        best_node = node;
      }
    }
    return assemble(best_node, *best);
  }

  std::size_t depth(std::int64_t node) const {
    std::size_t d = 0;
    for (; node >= 0; node = nodes_[static_cast<std::size_t>(node)].parent) ++d;
    return d;
  }

  SolveResult assemble(std::int64_t node, tick objective) {
    std::vector<const Node*> chain;
    for (; node >= 0; node = nodes_[static_cast<std::size_t>(node)].parent) chain.push_back(&nodes_[static_cast<std::size_t>(node)]);
    std::reverse(chain.begin(), chain.end());
    if (chain.size() != m_) throw std::logic_error("solver produced an incomplete assignment");

    SolveResult res;
    res.best.N.assign(n_, std::vector<std::int64_t>(m_));
    res.best.O.assign(n_, std::vector<Time>(m_));
    for (std::size_t j = 0; j < m_; ++j) {
      res.best.R.push_back(ts_.to_time(chain[j]->R));
      for (std::size_t i = 0; i < n_; ++i) {
        res.best.N[i][j] = chain[j]->N[i];
        res.best.O[i][j] = ts_.to_time(chain[j]->O[i]);
      }
    }
    res.objective = ts_.to_time(objective);
    res.nodes = count_;
    res.budget_exhausted = exhausted_;
    res.used_offset_candidates = used_candidates_;
    res.undecided_leaves = undecided_;
    res.status = exhausted_ || used_candidates_ || undecided_ ? SolveStatus::LowerBound : SolveStatus::Optimal;

    const CheckReport rep = check_assignment(model_, res.best);
    if (!rep.feasible || rep.objective != res.objective) {
      auto v = rep.first_violation();
      throw std::logic_error("solver returned a point the checker rejects" +
                             (v ? ": " + to_string(v->kind) + " task " + std::to_string(v->task) + " segment " + std::to_string(v->segment)
                                : std::string(": objective mismatch")));
    }
    return res;
  }
};

}  // namespace

SolveResult solve(const MilpModel& model, const SolveBudget& budget) { return Solver(model, budget).run(); }

}  // namespace ssrta
