#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace copter_cpi::cli {

struct AcaiArgs {
  std::string vehicle;
  std::string subsystem = "basic";
  std::vector<double> d;
  double psi = 0.0;
};

struct SimulateArgs {
  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

struct SweepArgs {
  std::string scenario;
  std::string vehicle;  ///< used with scenario defaults when no scenario is given
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<int> nd;
  std::optional<double> dsigma;
  std::optional<double> synthetic_threshold;
  std::optional<std::string> family;
  bool judge_uncontrollable = false;
};

struct ReplayArgs {
  std::string trace;
  std::string vehicle;
  std::string scenario;  ///< estimator, corruption and thresholds; defaults when empty
  std::string out = "replay_cpi.csv";
  std::optional<double> sigma_th_basic;
  std::optional<double> sigma_th_degraded;
  std::optional<double> sigma_th_lateral;
};

/// Each command prints its results to `out` and returns the process exit code.
/// Configuration problems surface as exceptions.
int cmd_acai(const AcaiArgs& args, std::ostream& out);
int cmd_simulate(const SimulateArgs& args, std::ostream& out);
int cmd_sweep(const SweepArgs& args, std::ostream& out);
int cmd_replay(const ReplayArgs& args, std::ostream& out);

/// Parses the command line and dispatches; errors become messages on stderr
/// and a non-zero exit code.
int run(int argc, char** argv);

}  // namespace copter_cpi::cli
