#pragma once

// Integer-tick view of a task system: every parameter multiplied by the lcm
// of all denominators, so searches can run on plain 64-bit integers.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ssrta/model.hpp"

namespace ssrta::detail {

__extension__ typedef __int128 wide_tick;

using tick = std::int64_t;
inline constexpr tick kInfTick = std::numeric_limits<tick>::max() / 4;

struct TickSystem {
  tick scale = 1;  // ticks per time unit
  std::vector<tick> C, T, D;
  std::vector<tick> seg, susp;
  tick ss_deadline = 0;
  tick ss_period = 0;

  Time to_time(tick v) const { return Time(v, scale); }
  tick to_ticks(const Time& t) const {
    wide_tick v = static_cast<wide_tick>(t.num()) * (scale / t.den());
    if (scale % t.den() != 0) throw std::logic_error("value not representable in ticks");
    if (v > kInfTick || v < -kInfTick) throw std::overflow_error("tick value overflow");
    return static_cast<tick>(v);
  }
};

inline TickSystem make_ticks(const TaskSystem& ts, const std::vector<Time>& extra = {}) {
  TickSystem out;
  auto absorb = [&](const Time& t) { out.scale = checked_lcm(out.scale, t.den()); };
  for (const auto& t : ts.hp_tasks()) {
    absorb(t.wcet);
    absorb(t.period);
    absorb(t.deadline);
  }
  const auto& ss = ts.ss_task();
  for (const auto& c : ss.comp_segments) absorb(c);
  for (const auto& s : ss.susp_intervals) absorb(s);
  absorb(ss.deadline);
  absorb(ss.period);
  for (const auto& e : extra) absorb(e);
  for (const auto& t : ts.hp_tasks()) {
    out.C.push_back(out.to_ticks(t.wcet));
    out.T.push_back(out.to_ticks(t.period));
    out.D.push_back(out.to_ticks(t.deadline));
  }
  for (const auto& c : ss.comp_segments) out.seg.push_back(out.to_ticks(c));
  for (const auto& s : ss.susp_intervals) out.susp.push_back(out.to_ticks(s));
  out.ss_deadline = out.to_ticks(ss.deadline);
  out.ss_period = out.to_ticks(ss.period);
  return out;
}

inline tick ceil_div_tick(tick a, tick b) {
  tick q = a / b;
  if ((a % b != 0) && ((a > 0) == (b > 0))) ++q;
  return q;
}

inline tick floor_div_tick(tick a, tick b) {
  tick q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace ssrta::detail
