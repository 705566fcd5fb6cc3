#include "copter_cpi/supervisor/supervisor.hpp"

#include <string>

#include "copter_cpi/error.hpp"

namespace copter_cpi::supervisor {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kM1:
      return "M1";
    case Mode::kM2:
      return "M2";
    case Mode::kM3:
      return "M3";
    case Mode::kM4:
      return "M4";
  }
  return "M?";
}

Mode parse_mode(std::string_view text) {
  if (text.size() == 2 && (text[0] == 'M' || text[0] == 'm')) {
    text.remove_prefix(1);
  }
  if (text == "1") return Mode::kM1;
  if (text == "2") return Mode::kM2;
  if (text == "3") return Mode::kM3;
  if (text == "4") return Mode::kM4;
  throw Error("unknown mode '" + std::string(text) + "'");
}

bool lateral_given_up(Mode mode) {
  return mode == Mode::kM2 || mode == Mode::kM4;
}

bool degraded(Mode mode) {
  return mode == Mode::kM3 || mode == Mode::kM4;
}

Mode make_mode(bool lateral_off, bool degraded_on) {
  if (lateral_off) {
    return degraded_on ? Mode::kM4 : Mode::kM2;
  }
  return degraded_on ? Mode::kM3 : Mode::kM1;
}

Mode join(Mode a, Mode b) {
  return make_mode(lateral_given_up(a) || lateral_given_up(b), degraded(a) || degraded(b));
}

bool reachable(Mode from, Mode to) {
  return join(from, to) == to;
}

Mode target_mode(const perf::CpiReport& report) {
  return make_mode(!(report.S_l > 0.0), !(report.S_b > 0.0));
}

ModeDecision next_mode(Mode current, const perf::CpiReport& report, DebounceState& debounce, int required) {
  const Mode target = target_mode(report);
  ModeDecision decision;
  decision.mode = current;
  decision.loc_imminent = degraded(target) && !(report.S_d > 0.0);

  const Mode proposed = join(current, target);
  if (proposed == current) {
    debounce = DebounceState{};
    return decision;
  }
  if (debounce.candidate == proposed) {
    ++debounce.count;
  } else {
    debounce.candidate = proposed;
    debounce.count = 1;
  }
  if (debounce.count >= required) {
    decision.mode = proposed;
    debounce = DebounceState{};
  }
  return decision;
}

Supervisor::Supervisor(int debounce, Mode initial) : required_(debounce) {
  if (debounce < 1) {
    throw Error("supervisor: debounce must be at least 1");
  }
  state_.mode = initial;
}

ModeDecision Supervisor::update(const perf::CpiReport& report, double time) {
  const ModeDecision decision = next_mode(state_.mode, report, debounce_, required_);
  if (decision.mode != state_.mode) {
    state_.transition_log.push_back(Transition{time, state_.mode, decision.mode, report});
    state_.mode = decision.mode;
    state_.since = time;
  }
  return decision;
}

}  // namespace copter_cpi::supervisor
