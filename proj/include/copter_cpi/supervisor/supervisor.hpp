#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "copter_cpi/perf/perf.hpp"

namespace copter_cpi::supervisor {

/// M1 nominal; M2 lateral given up; M3 degraded basic control; M4 both.
enum class Mode { kM1 = 1, kM2 = 2, kM3 = 3, kM4 = 4 };

std::string_view mode_name(Mode mode);
/// Parses "M1".."M4" or "1".."4". Throws copter_cpi::Error otherwise.
Mode parse_mode(std::string_view text);

bool lateral_given_up(Mode mode);
bool degraded(Mode mode);
Mode make_mode(bool lateral_given_up, bool degraded);

/// Least mode at or below both in M1 -> {M2, M3} -> M4.
Mode join(Mode a, Mode b);

/// Whether `to` may follow `from` (the same mode or further down the order).
bool reachable(Mode from, Mode to);

/// Mode the indices call for, ignoring history.
Mode target_mode(const perf::CpiReport& report);

struct Transition {
  double time = 0.0;
  Mode from = Mode::kM1;
  Mode to = Mode::kM1;
  perf::CpiReport report;
};

struct ModeState {
  Mode mode = Mode::kM1;
  double since = 0.0;
  std::vector<Transition> transition_log;
};

struct DebounceState {
  std::optional<Mode> candidate;
  int count = 0;
};

struct ModeDecision {
  Mode mode = Mode::kM1;
  /// Degraded control is called for but S_d <= 0 as well.
  bool loc_imminent = false;
};

/// Mode after one report. A move must be proposed by `required` consecutive
/// reports before it happens; the result never climbs back up the order.
ModeDecision next_mode(Mode current, const perf::CpiReport& report, DebounceState& debounce,
                       int required = 5);

class Supervisor {
 public:
  explicit Supervisor(int debounce = 5, Mode initial = Mode::kM1);

  /// Feeds one report; logs and returns the (possibly new) mode.
  ModeDecision update(const perf::CpiReport& report, double time);

  const ModeState& state() const { return state_; }
  Mode mode() const { return state_.mode; }

 private:
  int required_;
  ModeState state_;
  DebounceState debounce_;
};

}  // namespace copter_cpi::supervisor
