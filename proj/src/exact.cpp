#include "ssrta/exact.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <thread>

#include "ticks.hpp"

namespace ssrta {

using detail::ceil_div_tick;
using detail::kInfTick;
using detail::tick;

std::string to_string(OffsetRule r) {
  switch (r) {
    case OffsetRule::ForcedZero: return "forced-zero";
    case OffsetRule::SingleJob: return "single-job";
    case OffsetRule::Free: return "free";
  }
  return "unknown";
}

std::string to_string(ExactStatus s) {
  switch (s) {
    case ExactStatus::Exact: return "exact";
    case ExactStatus::DeadlineMiss: return "deadline-miss";
    case ExactStatus::CapExceeded: return "cap-exceeded";
  }
  return "unknown";
}

std::vector<OffsetRule> apply_pruning(const TaskSystem& ts, std::size_t segment) {
  const auto& ss = ts.ss_task();
  const std::size_t m = ss.segment_count();
  if (segment >= m) throw std::out_of_range("segment index out of range");
  std::vector<OffsetRule> out;
  for (const auto& t : ts.hp_tasks()) {
    // Window independent of its neighbours when the task can re-release across
    // every adjacent suspension. T - C <= S covers T <= S as well.
    const Time slack = t.period - t.wcet;
    bool left = segment == 0 || slack <= ss.susp_intervals[segment - 1];
    bool right = segment + 1 == m || slack <= ss.susp_intervals[segment];
    if (left && right)
      out.push_back(OffsetRule::ForcedZero);
    else if (t.period >= ss.period)
      out.push_back(OffsetRule::SingleJob);
    else
      out.push_back(OffsetRule::Free);
  }
  return out;
}

std::vector<std::vector<OffsetRule>> pruning_matrix(const TaskSystem& ts) {
  std::vector<std::vector<OffsetRule>> out(ts.hp_count(), std::vector<OffsetRule>(ts.segment_count()));
  for (std::size_t j = 0; j < ts.segment_count(); ++j) {
    auto col = apply_pruning(ts, j);
    for (std::size_t i = 0; i < ts.hp_count(); ++i) out[i][j] = col[i];
  }
  return out;
}

namespace {

constexpr tick kUnlimited = -1;

// A train of jobs starting at `first` (relative to the window start) spaced
// exactly one period apart; count is kUnlimited or a job count.
struct Train {
  tick first = kInfTick;
  tick count = 0;
};

struct Node {
  std::vector<tick> lb;  // earliest admissible release, relative to this window
  tick elapsed = 0;      // g_j - g_1
  std::int64_t parent = -1;
  std::vector<Train> via;  // trains used in the previous window
  tick via_response = 0;
};

struct Successor {
  std::vector<tick> lb;
  tick elapsed;
  std::vector<Train> via;
  tick response;
};

struct Expansion {
  bool miss = false;
  std::vector<Train> miss_trains;  // trains of the missing window, truncated
  std::vector<Successor> next;
  std::optional<tick> final_response;  // last window only
  std::vector<Train> final_trains;
  std::uint64_t explored = 0;
};

class Search {
public:
  Search(const TaskSystem& ts, const SearchConfig& cfg)
      : ts_(ts), cfg_(cfg), tk_(detail::make_ticks(ts, cfg.offset_grid ? std::vector<Time>{*cfg.offset_grid}
                                                                           : std::vector<Time>{})) {
    n_ = ts.hp_count();
    m_ = ts.segment_count();
    if (cfg.offset_grid) {
      if (*cfg.offset_grid <= Time(0)) throw std::invalid_argument("offset grid step must be positive");
      grid_ = tk_.to_ticks(*cfg.offset_grid);
    }
    rules_.assign(n_, std::vector<OffsetRule>(m_, OffsetRule::Free));
    if (cfg.prune) rules_ = pruning_matrix(ts);
  }

  ExactResult run();

private:
  tick jobs_before(const Train& tr, std::size_t i, tick t) const {
    if (tr.first >= kInfTick || tr.count == 0 || t <= tr.first) return 0;
    tick c = ceil_div_tick(t - tr.first, tk_.T[i]);
    return tr.count == kUnlimited ? c : std::min(c, tr.count);
  }

  // Least fixed point of the window demand; nullopt once it passes limit.
  std::optional<tick> response(std::size_t j, const std::vector<Train>& trains, tick limit) const {
    tick t = tk_.seg[j];
    for (;;) {
      tick w = tk_.seg[j];
      for (std::size_t i = 0; i < n_; ++i) w += tk_.C[i] * jobs_before(trains[i], i, t);
      if (w == t) return t;
      if (w > limit) return std::nullopt;
      t = w;
    }
  }

  Expansion expand(const Node& node, std::size_t j) const;
  ReleasePattern build_pattern(const std::vector<std::vector<Node>>& layers, std::size_t j, std::int64_t idx,
                               const std::vector<Train>& last, tick last_elapsed, tick truncate_at) const;
  std::pair<bool, tick> greedy_finish(const Node& node, std::size_t j, std::vector<std::vector<Train>>& trains,
                                      std::vector<tick>& starts) const;

  const TaskSystem& ts_;
  SearchConfig cfg_;
  detail::TickSystem tk_;
  std::size_t n_ = 0, m_ = 0;
  tick grid_ = 0;
  std::vector<std::vector<OffsetRule>> rules_;
};

Expansion Search::expand(const Node& node, std::size_t j) const {
  Expansion ex;
  const tick limit = tk_.ss_period - node.elapsed;
  const bool last = j + 1 == m_;

  std::vector<Train> maxcfg(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (node.lb[i] >= kInfTick) continue;
    bool single = cfg_.prune && rules_[i][j] == OffsetRule::SingleJob;
    maxcfg[i] = {node.lb[i], single ? 1 : kUnlimited};
  }
  ex.explored = 1;
  auto rmax = response(j, maxcfg, limit);
  if (!rmax) {
    ex.miss = true;
    ex.miss_trains = maxcfg;
    for (std::size_t i = 0; i < n_; ++i)
      if (maxcfg[i].count == kUnlimited) maxcfg[i].count = jobs_before(maxcfg[i], i, limit + 1);
    ex.miss_trains = maxcfg;
    return ex;
  }
  if (last) {
    ex.final_response = *rmax;
    ex.final_trains = maxcfg;
    for (std::size_t i = 0; i < n_; ++i)
      if (ex.final_trains[i].count == kUnlimited) ex.final_trains[i].count = jobs_before(maxcfg[i], i, *rmax);
    return ex;
  }

  // Options per task.
  std::vector<std::vector<Train>> options(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    auto& opt = options[i];
    if (node.lb[i] >= kInfTick) {
      opt.push_back({kInfTick, 0});
      continue;
    }
    if (cfg_.prune && rules_[i][j] == OffsetRule::ForcedZero) {
      opt.push_back({node.lb[i], kUnlimited});
      continue;
    }
    const bool single = cfg_.prune && rules_[i][j] == OffsetRule::SingleJob;
    opt.push_back({kInfTick, 0});
    if (grid_ == 0) {
      tick kmax = jobs_before({node.lb[i], kUnlimited}, i, *rmax);
      if (single) kmax = std::min<tick>(kmax, 1);
      for (tick k = 1; k <= kmax; ++k) opt.push_back({node.lb[i], k});
    } else {
      for (tick o = node.lb[i]; o < *rmax; o += grid_) {
        tick kmax = jobs_before({o, kUnlimited}, i, *rmax);
        if (single) kmax = std::min<tick>(kmax, 1);
        for (tick k = 1; k <= kmax; ++k) opt.push_back({o, k});
      }
    }
  }

  std::vector<std::size_t> pick(n_, 0);
  std::vector<Train> trains(n_);
  for (;;) {
    for (std::size_t i = 0; i < n_; ++i) trains[i] = options[i][pick[i]];
    ++ex.explored;
    auto r = response(j, trains, limit);
    // rmax bounds every configuration, so r is always present here.
    bool valid = r.has_value();
    if (valid) {
      for (std::size_t i = 0; i < n_ && valid; ++i) {
        const auto& tr = trains[i];
        if (tr.count > 0 && tr.first + (tr.count - 1) * tk_.T[i] >= *r) valid = false;
      }
    }
    if (valid) {
      Successor s;
      s.response = *r;
      s.elapsed = node.elapsed + *r + tk_.susp[j];
      s.lb.resize(n_);
      s.via = trains;
      for (std::size_t i = 0; i < n_; ++i) {
        auto& tr = s.via[i];
        if (tr.count == kUnlimited) tr.count = jobs_before(tr, i, *r);
        tick nlb;
        if (tr.count > 0) {
          tick lastrel = tr.first + (tr.count - 1) * tk_.T[i];
          nlb = std::max<tick>(0, lastrel + tk_.T[i] - *r - tk_.susp[j]);
        } else if (node.lb[i] >= kInfTick) {
          nlb = kInfTick;
        } else {
          nlb = std::max<tick>(0, node.lb[i] - *r - tk_.susp[j]);
        }
        if (nlb < kInfTick && s.elapsed + nlb >= tk_.ss_period) nlb = kInfTick;
        s.lb[i] = nlb;
      }
      ex.next.push_back(std::move(s));
    }
    std::size_t d = 0;
    while (d < n_) {
      if (++pick[d] < options[d].size()) break;
      pick[d] = 0;
      ++d;
    }
    if (d == n_) break;
  }
  return ex;
}

ReleasePattern Search::build_pattern(const std::vector<std::vector<Node>>& layers, std::size_t j, std::int64_t idx,
                                     const std::vector<Train>& last, tick last_elapsed, tick truncate_at) const {
  // Collect (window start, trains) backwards.
  std::vector<std::pair<tick, std::vector<Train>>> windows;
  windows.emplace_back(last_elapsed, last);
  std::size_t layer = j;
  while (layer > 0) {
    const Node& nd = layers[layer][static_cast<std::size_t>(idx)];
    const Node& parent = layers[layer - 1][static_cast<std::size_t>(nd.parent)];
    windows.emplace_back(parent.elapsed, nd.via);
    idx = nd.parent;
    --layer;
  }
  std::reverse(windows.begin(), windows.end());
  ReleasePattern rp;
  rp.hp_releases.resize(n_);
  rp.ss_job_release = Time(0);
  rp.susp_durations = ts_.ss_task().susp_intervals;
  for (const auto& [start, trains] : windows) {
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& tr = trains[i];
      if (tr.first >= kInfTick) continue;
      for (tick a = 0; a < tr.count; ++a) {
        tick at = start + tr.first + a * tk_.T[i];
        if (at > truncate_at) break;
        rp.hp_releases[i].push_back(tk_.to_time(at));
      }
    }
  }
  return rp;
}

ExactResult Search::run() {
  ExactResult res;
  res.method = grid_ ? "earliest-release trains plus first offsets on grid " + cfg_.offset_grid->str()
                     : "earliest-release trains (no offset grid)";
  std::vector<std::vector<Node>> layers(m_);
  Node root;
  root.lb.assign(n_, 0);
  layers[0].push_back(root);

  std::optional<tick> best;
  std::int64_t best_idx = -1;
  std::vector<Train> best_trains;
  tick best_start = 0;
  const unsigned threads = std::max(1u, cfg_.threads);

  for (std::size_t j = 0; j < m_; ++j) {
    auto& layer = layers[j];
    std::map<std::vector<tick>, std::size_t> index;
    std::vector<Node> next;
    const std::size_t batch = std::max<std::size_t>(threads * 16, 64);
    for (std::size_t lo = 0; lo < layer.size(); lo += batch) {
      const std::size_t hi = std::min(layer.size(), lo + batch);
      std::vector<Expansion> exps(hi - lo);
      if (threads == 1 || hi - lo == 1) {
        for (std::size_t s = lo; s < hi; ++s) exps[s - lo] = expand(layer[s], j);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
          pool.emplace_back([&, w] {
            for (std::size_t s = lo + w; s < hi; s += threads) exps[s - lo] = expand(layer[s], j);
          });
        }
        for (auto& th : pool) th.join();
      }
      for (std::size_t s = lo; s < hi; ++s) {
        Expansion& ex = exps[s - lo];
        res.explored += ex.explored;
        if (ex.miss) {
          res.status = ExactStatus::DeadlineMiss;
          const tick limit = tk_.ss_period;
          res.witness = build_pattern(layers, j, static_cast<std::int64_t>(s), ex.miss_trains, layer[s].elapsed, limit);
          res.wcrt = tk_.to_time(tk_.ss_period + 1);
          auto tr = simulate(ts_, *res.witness, tk_.to_time(tk_.ss_period + 1));
          if (tr.ss_response && *tr.ss_response <= ts_.ss_task().period)
            throw std::logic_error("deadline-miss witness does not replay as a miss");
          if (tr.ss_response) res.wcrt = *tr.ss_response;
          res.states += layer.size();
          return res;
        }
        if (ex.final_response) {
          tick total = layer[s].elapsed + *ex.final_response;
          if (!best || total > *best) {
            best = total;
            best_idx = static_cast<std::int64_t>(s);
            best_trains = ex.final_trains;
            best_start = layer[s].elapsed;
          }
        }
        for (auto& succ : ex.next) {
          auto it = index.find(succ.lb);
          if (it == index.end()) {
            index.emplace(succ.lb, next.size());
            Node nd{succ.lb, succ.elapsed, static_cast<std::int64_t>(s), std::move(succ.via), succ.response};
            next.push_back(std::move(nd));
          } else if (succ.elapsed > next[it->second].elapsed) {
            Node& nd = next[it->second];
            nd.elapsed = succ.elapsed;
            nd.parent = static_cast<std::int64_t>(s);
            nd.via = std::move(succ.via);
            nd.via_response = succ.response;
          }
        }
        if (res.explored > cfg_.cap) {
          // Finish every state of this layer with maximal releases for a certified lower bound.
          res.status = ExactStatus::CapExceeded;
          res.states += layer.size();
          std::optional<tick> lb_best;
          ReleasePattern lb_pattern;
          for (std::size_t q = 0; q < layer.size(); ++q) {
            std::vector<std::vector<Train>> trains;
            std::vector<tick> starts;
            auto [miss, total] = greedy_finish(layer[q], j, trains, starts);
            ReleasePattern rp = build_pattern(layers, j, static_cast<std::int64_t>(q), trains.front(),
                                              starts.front(), kInfTick);
            for (std::size_t w = 1; w < trains.size(); ++w)
              for (std::size_t i = 0; i < n_; ++i) {
                const auto& tr = trains[w][i];
                if (tr.first >= kInfTick) continue;
                for (tick a = 0; a < tr.count; ++a)
                  rp.hp_releases[i].push_back(tk_.to_time(starts[w] + tr.first + a * tk_.T[i]));
              }
            if (miss) {
              res.status = ExactStatus::DeadlineMiss;
              res.witness = rp;
              res.wcrt = tk_.to_time(tk_.ss_period + 1);
              return res;
            }
            if (!lb_best || total > *lb_best) {
              lb_best = total;
              lb_pattern = rp;
            }
          }
          res.wcrt = tk_.to_time(*lb_best);
          res.witness = lb_pattern;
          return res;
        }
      }
    }
    res.states += layer.size();
    if (j + 1 < m_) layers[j + 1] = std::move(next);
  }

  res.status = ExactStatus::Exact;
  res.wcrt = tk_.to_time(*best);
  res.witness = build_pattern(layers, m_ - 1, best_idx, best_trains, best_start, kInfTick);
  auto replay = simulate(ts_, *res.witness, res.wcrt + Time(1));
  if (!replay.ss_response || *replay.ss_response != res.wcrt)
    throw std::logic_error("exact witness replays to " +
                           (replay.ss_response ? replay.ss_response->str() : std::string("unfinished")) +
                           " instead of " + res.wcrt.str());
  return res;
}

std::pair<bool, tick> Search::greedy_finish(const Node& node, std::size_t j, std::vector<std::vector<Train>>& trains,
                                            std::vector<tick>& starts) const {
  std::vector<tick> lb = node.lb;
  tick elapsed = node.elapsed;
  for (std::size_t w = j; w < m_; ++w) {
    std::vector<Train> cfg(n_);
    for (std::size_t i = 0; i < n_; ++i)
      if (lb[i] < kInfTick) cfg[i] = {lb[i], kUnlimited};
    const tick limit = tk_.ss_period - elapsed;
    auto r = response(w, cfg, limit);
    for (std::size_t i = 0; i < n_; ++i)
      if (cfg[i].count == kUnlimited) cfg[i].count = jobs_before(cfg[i], i, r ? *r : limit + 1);
    trains.push_back(cfg);
    starts.push_back(elapsed);
    if (!r) return {true, elapsed + limit + 1};
    if (w + 1 == m_) return {false, elapsed + *r};
    const tick next_elapsed = elapsed + *r + tk_.susp[w];
    for (std::size_t i = 0; i < n_; ++i) {
      tick nlb;
      if (cfg[i].count > 0)
        nlb = std::max<tick>(0, cfg[i].first + cfg[i].count * tk_.T[i] - *r - tk_.susp[w]);
      else if (lb[i] >= kInfTick)
        nlb = kInfTick;
      else
        nlb = std::max<tick>(0, lb[i] - *r - tk_.susp[w]);
      if (nlb < kInfTick && next_elapsed + nlb >= tk_.ss_period) nlb = kInfTick;
      lb[i] = nlb;
    }
    elapsed = next_elapsed;
  }
  return {false, elapsed};
}

}  // namespace

ExactResult exact_wcrt(const TaskSystem& ts, const SearchConfig& cfg) { return Search(ts, cfg).run(); }

}  // namespace ssrta
