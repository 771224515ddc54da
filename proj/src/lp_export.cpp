// CPLEX LP text for the count/offset/response model.
//
// Every time quantity is written in integer units of 1/D, where D is the lcm
// of all denominators (parameters, bounds and the strictness margin), so the
// file contains integer coefficients only. Strict inequalities become
// non-strict ones shifted by the margin. The last-release slack constraint
// uses one integer per floor term and a binary per (task, segment) that is 1
// exactly when the task has a counted job.

#include <algorithm>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ssrta/milp.hpp"
#include "ticks.hpp"

namespace ssrta {

namespace {

using detail::tick;

std::string var(const char* base, std::size_t a) { return std::string(base) + "_" + std::to_string(a + 1); }
std::string var(const char* base, std::size_t a, std::size_t b) { return var(base, a) + "_" + std::to_string(b + 1); }
std::string var(const char* base, std::size_t a, std::size_t b, std::size_t c) { return var(base, a, b) + "_" + std::to_string(c + 1); }

// Linear expression; repeated variables are merged, in first-seen order.
// A coefficient of one is written bare.
class Expr {
public:
  Expr& add(tick coef, const std::string& name) {
    auto it = std::find_if(terms_.begin(), terms_.end(), [&](const auto& t) { return t.second == name; });
    if (it == terms_.end()) terms_.emplace_back(coef, name);
    else it->first += coef;
    return *this;
  }
  std::string str() const {
    std::ostringstream out;
    bool empty = true;
    for (const auto& [coef, name] : terms_) {
      if (coef == 0) continue;
      out << (coef < 0 ? " - " : (empty ? " " : " + "));
      const tick a = coef < 0 ? -coef : coef;
      if (a != 1) out << a << ' ';
      out << name;
      empty = false;
    }
    if (empty && !terms_.empty()) return " 0 " + terms_.front().second;
    return out.str();
  }

private:
  std::vector<std::pair<tick, std::string>> terms_;
};

tick big_r(const MilpModel& model, const detail::TickSystem& ts, std::size_t j) {
  if (model.include_seg_ub && model.variant != MilpVariant::V1) return ts.to_ticks(model.ub_seg[j]);
  const auto& hp = model.ts.hp_tasks();
  if (hp.empty()) return ts.seg[j];
  const Time u = hp_utilization(model.ts, model.ts.hp_count());
  if (u >= Time(1)) throw ModelError("unbounded N-space: hp utilization " + u.str() + " >= 1 and the model has no segment bounds");
  Time work = model.ts.ss_task().comp_segments[j];
  for (const auto& t : hp) work += t.wcet;
  return (work / (Time(1) - u) * Time(ts.scale)).ceil();
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  std::vector<Time> extra{model.gamma};
  if (model.include_seg_ub) extra.insert(extra.end(), model.ub_seg.begin(), model.ub_seg.end());
  if (model.include_total_ub) extra.push_back(model.ub_total);
  const detail::TickSystem ts = detail::make_ticks(model.ts, extra);
  const tick gamma = ts.to_ticks(model.gamma);
  const std::size_t n = model.ts.hp_count(), m = model.ts.segment_count();
  const bool v1 = model.variant == MilpVariant::V1;
  std::vector<tick> cap(m);
  for (std::size_t j = 0; j < m; ++j) cap[j] = big_r(model, ts, j);
  tick susp_total = 0;
  for (tick s : ts.susp) susp_total += s;

  std::ostringstream lp;
  lp << "\\ response-time model, variant " << to_string(model.variant) << "\n"
     << "\\ time unit: 1/" << ts.scale << "\n"
     << "\\ strictness margin: " << model.gamma.str() << " = " << gamma << " units; strict inequalities a < b are written a <= b - margin\n";

  std::vector<std::string> rows;
  auto row = [&](const std::string& name, const Expr& e, const char* sense, tick rhs) {
    rows.push_back(" " + name + ":" + e.str() + " " + sense + " " + std::to_string(rhs));
  };
  std::vector<std::string> generals, binaries;
  Expr objective;

  if (v1) {
    objective.add(1, var("f", m - 1));
    for (std::size_t j = 0; j < m; ++j) {
      if (j == 0) {
        row("arrival_1", Expr().add(1, var("g", 0)), "=", 0);
      } else {
        row(var("arrival", j), Expr().add(1, var("g", j)).add(-1, var("f", j - 1)), "=", ts.susp[j - 1]);
      }
      Expr demand;
      demand.add(1, var("f", j)).add(-1, var("g", j));
      for (std::size_t i = 0; i < n; ++i) demand.add(-ts.C[i], var("N", i, j));
      row(var("finish", j), demand, "<=", ts.seg[j]);
      for (std::size_t i = 0; i < n; ++i) {
        row(var("after", i, j), Expr().add(1, var("r", i, j)).add(-1, var("g", j)), ">=", 0);
        row(var("count", i, j), Expr().add(ts.T[i], var("N", i, j)).add(1, var("r", i, j)).add(-1, var("f", j)), "<=", ts.T[i] - gamma);
        if (j + 1 < m)
          row(var("spacing", i, j), Expr().add(1, var("r", i, j + 1)).add(-1, var("r", i, j)).add(-ts.T[i], var("N", i, j)), ">=", 0);
        generals.push_back(var("N", i, j));
      }
    }
  } else {
    objective.add(1, "Sn");
    for (std::size_t j = 0; j < m; ++j) objective.add(1, var("R", j));
    for (std::size_t j = 0; j < m; ++j) {
      Expr demand;
      demand.add(1, var("R", j));
      for (std::size_t i = 0; i < n; ++i) demand.add(-ts.C[i], var("N", i, j));
      row(var("demand", j), demand, "=", ts.seg[j]);
      for (std::size_t i = 0; i < n; ++i) {
        generals.push_back(var("N", i, j));
        if (j + 1 < m)
          row(var("chain", i, j),
              Expr().add(1, var("O", i, j + 1)).add(-1, var("O", i, j)).add(-ts.T[i], var("N", i, j)).add(1, var("R", j)), ">=",
              -ts.susp[j]);
        row(var("count", i, j), Expr().add(ts.T[i], var("N", i, j)).add(1, var("O", i, j)).add(-1, var("R", j)), "<=", ts.T[i] - gamma);
      }
      if (!model.include_rel) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string z = var("z", i, j);
        binaries.push_back(z);
        const tick nmax = cap[j] / ts.T[i] + 1;
        row(var("active_lo", i, j), Expr().add(1, z).add(-1, var("N", i, j)), "<=", 0);
        row(var("active_hi", i, j), Expr().add(1, var("N", i, j)).add(-nmax, z), "<=", 0);
        // Largest possible value of the left side when the binary is 0.
        tick big = ts.T[i] + gamma + cap[j];
        Expr slack;
        slack.add(1, var("R", j)).add(-1, var("O", i, j)).add(-ts.T[i], var("N", i, j));
        for (std::size_t l = 0; l < n; ++l) {
          const std::string p = var("P", i, l, j);
          generals.push_back(p);
          // p >= floor((O_l + N_l T_l - rel_i) / T_l), i.e. T_l p > O_l + N_l T_l - rel_i - T_l.
          row(var("floor", i, l, j),
              Expr().add(ts.T[l], p).add(-1, var("O", l, j)).add(-ts.T[l], var("N", l, j)).add(1, var("O", i, j)).add(ts.T[i], var("N", i, j)),
              ">=", ts.T[i] - ts.T[l] + gamma);
          slack.add(-ts.C[l], p);
          big += ts.C[l] * ((2 * cap[j] + 2 * ts.T[l] + ts.T[i]) / ts.T[l] + 2);
        }
        slack.add(-big, z);
        row(var("release_slack", i, j), slack, ">=", gamma - ts.T[i] - big);
      }
    }
    Expr total;
    total.add(1, "Total").add(-1, "Sn");
    for (std::size_t j = 0; j < m; ++j) total.add(-1, var("R", j));
    row("total", total, "=", 0);
  }

  lp << "Maximize\n obj:" << objective.str() << "\nSubject To\n";
  for (const auto& r : rows) lp << r << "\n";
  lp << "Bounds\n";
  if (!v1) {
    lp << " Sn = " << susp_total << "\n";
    if (model.include_seg_ub)
      for (std::size_t j = 0; j < m; ++j) lp << " " << var("R", j) << " <= " << ts.to_ticks(model.ub_seg[j]) << "\n";
    if (model.include_total_ub) lp << " Total <= " << ts.to_ticks(model.ub_total) << "\n";
  } else {
    for (std::size_t j = 0; j < m; ++j) lp << " " << var("g", j) << " >= 0\n";
  }
  if (!generals.empty()) {
    lp << "General\n";
    for (const auto& g : generals) lp << " " << g << "\n";
  }
  if (!binaries.empty()) {
    lp << "Binary\n";
    for (const auto& b : binaries) lp << " " << b << "\n";
  }
  lp << "End\n";
  return lp.str();
}

MilpBounds parse_lp_bounds(const std::string& lp_text) {
  std::istringstream in(lp_text);
  std::string line;
  std::int64_t scale = 0;
  bool in_bounds = false;
  MilpBounds out;
  std::vector<std::pair<std::size_t, Time>> seg;
  const std::regex unit_re(R"(^\\ time unit: 1/(\d+))");
  const std::regex seg_re(R"(^\s*R_(\d+)\s*<=\s*(-?\d+)\s*$)");
  const std::regex total_re(R"(^\s*Total\s*<=\s*(-?\d+)\s*$)");
  std::smatch mt;
  while (std::getline(in, line)) {
    if (std::regex_search(line, mt, unit_re)) scale = std::stoll(mt[1]);
    if (line == "Bounds") {
      in_bounds = true;
      continue;
    }
    if (!in_bounds) continue;
    if (line == "General" || line == "Binary" || line == "End") break;
    if (scale == 0) throw std::invalid_argument("LP text has no time unit header");
    if (std::regex_match(line, mt, seg_re)) seg.emplace_back(std::stoull(mt[1]), Time(std::stoll(mt[2]), scale));
    else if (std::regex_match(line, mt, total_re)) out.ub_total = Time(std::stoll(mt[1]), scale);
  }
  std::sort(seg.begin(), seg.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < seg.size(); ++k) {
    if (seg[k].first != k + 1) throw std::invalid_argument("LP bounds skip segment " + std::to_string(k + 1));
    out.ub_seg.push_back(seg[k].second);
  }
  return out;
}

}  // namespace ssrta
