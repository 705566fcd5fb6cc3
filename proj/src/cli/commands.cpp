#include "copter_cpi/cli/commands.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "copter_cpi/cli/config.hpp"
#include "copter_cpi/cli/csv.hpp"
#include "copter_cpi/ctrlgeom/acai.hpp"
#include "copter_cpi/perf/perf.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  return out;
}

std::string describe_partition(const ctrlgeom::FacetPartition& part) {
  std::string s = "kept {";
  for (std::size_t i = 0; i < part.kept.size(); ++i) {
    s += (i ? "," : "") + std::to_string(part.kept[i] + 1);
  }
  s += "} remaining {";
  for (std::size_t i = 0; i < part.remaining.size(); ++i) {
    s += (i ? "," : "") + std::to_string(part.remaining[i] + 1);
  }
  return s + "}";
}

}  // namespace

int cmd_acai(const AcaiArgs& args, std::ostream& out) {
  const vehicle::VehicleParams params = load_vehicle(args.vehicle);
  const vehicle::Subsystem subsystem = parse_subsystem(args.subsystem);
  const vehicle::LinearPlant plant = vehicle::make_plant(subsystem, params, args.psi);
  if (static_cast<Eigen::Index>(args.d.size()) != plant.n()) {
    throw Error("--d needs " + std::to_string(plant.n()) + " values for the " + args.subsystem + " subsystem");
  }
  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(args.d.data(), plant.n());
  const ctrlgeom::FacetTable table(plant.control_set());
  const ctrlgeom::AcaiResult r = table.acai(d);

  out << "subsystem: " << args.subsystem << "\n";
  out << "rho: " << format_double(r.value) << "\n";
  out << "max_acai: " << format_double(table.max_acai()) << "\n";
  out << "sigma: " << format_double(perf::doc(table, d)) << "\n";
  if (r.partition) {
    out << "argmin_partition: " << *r.partition << " (" << describe_partition(table.partitions()[*r.partition])
        << ")\n";
  }
  return 0;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  ScenarioConfig cfg = load_scenario(args.scenario);
  if (args.seed) {
    cfg.scenario.seed = *args.seed;
  }
  spdlog::info("simulating '{}' for {} s", cfg.scenario.name, cfg.scenario.duration);
  const auto start = std::chrono::steady_clock::now();
  const supervisor::Trace trace = supervisor::run_closed_loop(cfg.scenario);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("simulation finished in {:.2f} s", elapsed);

  const std::filesystem::path path = std::filesystem::path(args.out_dir) / cfg.trace_file;
  {
    std::ofstream file = open_output(path);
    write_trace(file, trace, cfg.scenario.vehicle.propulsor_count());
  }

  const supervisor::TraceSummary s = supervisor::summarize(trace);
  out << "scenario: " << cfg.scenario.name << "\n";
  out << "trace: " << path.string() << "\n";
  out << "samples: " << trace.rows.size() << "\n";
  out << "final_mode: " << supervisor::mode_name(s.final_mode) << "\n";
  out << "min_S_l: " << format_double(s.min_S_l) << "\n";
  out << "min_S_b: " << format_double(s.min_S_b) << "\n";
  out << "min_S_d: " << format_double(s.min_S_d) << "\n";
  for (const supervisor::Transition& t : s.transitions) {
    out << "switch: " << format_double(t.time) << " " << supervisor::mode_name(t.from) << " -> "
        << supervisor::mode_name(t.to) << "\n";
  }
  out << "diverged: " << (s.diverged ? "yes" : "no");
  if (s.diverged_at) {
    out << " at " << format_double(*s.diverged_at);
  }
  out << "\n";
  return 0;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out) {
  ScenarioConfig cfg;
  if (!args.scenario.empty()) {
    cfg = load_scenario(args.scenario);
  } else if (!args.vehicle.empty()) {
    cfg.scenario.vehicle = load_vehicle(args.vehicle);
    cfg.scenario.name = cfg.scenario.vehicle.name;
  } else {
    throw Error("sweep needs --scenario or --vehicle");
  }
  SweepConfig sweep = cfg.sweep;
  if (args.nd) sweep.nd = *args.nd;
  if (args.dsigma) sweep.delta_sigma = *args.dsigma;
  if (args.synthetic_threshold) sweep.synthetic_threshold = *args.synthetic_threshold;
  if (args.family) sweep.family = parse_subsystem(*args.family);
  if (args.judge_uncontrollable) sweep.judge_uncontrollable = true;
  const std::size_t workers = args.workers.value_or(threshold::default_workers());

  const vehicle::VehicleParams& params = cfg.scenario.vehicle;
  const vehicle::LinearPlant plant = vehicle::make_plant(sweep.family, params, cfg.scenario.reference.psi);
  const threshold::GridBounds bounds = sweep.bounds.value_or(threshold::default_bounds(sweep.family, params));
  if (bounds.lower.size() != plant.n()) {
    throw Error("sweep bounds have " + std::to_string(bounds.lower.size()) + " axes, the " +
                std::string(vehicle::subsystem_name(sweep.family)) + " subsystem has " + std::to_string(plant.n()));
  }
  const threshold::DisturbanceGrid grid(bounds.lower, bounds.upper, sweep.nd);
  const ctrlgeom::FacetTable table(plant.control_set());
  spdlog::info("sweep: {} grid points, {} workers", grid.size(), workers);

  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> sigma = threshold::doc_over_grid(table, grid, workers);
  const threshold::Judge judge =
      sweep.synthetic_threshold
          ? threshold::synthetic_judge(*sweep.synthetic_threshold)
          : threshold::simulation_judge(sweep.family, params, cfg.scenario.gains, sweep.judge);
  threshold::SweepOptions options;
  options.delta_sigma = sweep.delta_sigma;
  options.workers = workers;
  options.judge_uncontrollable = sweep.judge_uncontrollable;
  const threshold::ThresholdResult result = threshold::determine_threshold(grid, sigma, judge, options);

  // Points just above the threshold are the ones worth re-verifying.
  const double c_sigma = cfg.scenario.pipeline.thresholds.confidence;
  const std::vector<std::size_t> band = threshold::confidence_scan(sigma, result.sigma_th, c_sigma);
  std::size_t band_stable = 0;
  for (std::size_t i : band) {
    band_stable += judge(grid.point(i), sigma[i]).stable ? 1 : 0;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("sweep finished in {:.2f} s", elapsed);

  const std::string stem = cfg.scenario.name + "_" + std::string(vehicle::subsystem_name(sweep.family));
  const std::filesystem::path dir(args.out_dir);
  {
    std::ofstream f = open_output(dir / (stem + "_points.csv"));
    write_sweep_points(f, grid, result);
  }
  {
    std::ofstream f = open_output(dir / (stem + "_buckets.csv"));
    write_buckets(f, result.report);
  }
  {
    std::ofstream f = open_output(dir / (stem + "_confidence.csv"));
    std::vector<std::string> h = {"grid_index"};
    for (Eigen::Index k = 0; k < grid.dim(); ++k) {
      h.push_back("d_" + std::to_string(k));
    }
    h.emplace_back("sigma");
    write_csv_row(f, h);
    for (std::size_t i : band) {
      std::vector<std::string> row = {std::to_string(i)};
      const Eigen::VectorXd p = grid.point(i);
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        row.push_back(format_double(p(k)));
      }
      row.push_back(format_double(sigma[i]));
      write_csv_row(f, row);
    }
  }

  out << "family: " << vehicle::subsystem_name(sweep.family) << "\n";
  out << "grid_points: " << grid.size() << "\n";
  out << "sigma_th: " << format_double(result.sigma_th) << "\n";
  if (result.no_instability) {
    out << "note: no instability found\n";
  }
  if (result.unreasonable) {
    out << "note: unstable in the top bucket, threshold unreasonable\n";
  }
  out << "bucket,total,stable,percentage\n";
  for (const threshold::BucketRow& row : result.report.rows) {
    out << row.label << "," << row.total << "," << row.stable << "," << format_double(row.percentage)
        << (row.searched ? "" : " (not searched)") << "\n";
  }
  out << "uncontrollable: " << result.report.uncontrollable_total << " (judged "
      << result.report.uncontrollable_judged << ", stable " << result.report.uncontrollable_stable << ")\n";
  out << "confidence_band: " << band.size() << " points, " << band_stable << " stable\n";
  return 0;
}

int cmd_replay(const ReplayArgs& args, std::ostream& out) {
  supervisor::Scenario scenario;
  if (!args.scenario.empty()) {
    scenario = load_scenario(args.scenario).scenario;
  }
  if (!args.vehicle.empty()) {
    scenario.vehicle = load_vehicle(args.vehicle);
  } else if (args.scenario.empty()) {
    throw Error("replay needs --vehicle or --scenario");
  }
  perf::ThresholdSet& th = scenario.pipeline.thresholds;
  if (args.sigma_th_basic) th.sigma_th_basic = *args.sigma_th_basic;
  if (args.sigma_th_degraded) th.sigma_th_degraded = *args.sigma_th_degraded;
  if (args.sigma_th_lateral) th.sigma_th_lateral = *args.sigma_th_lateral;
  th.validate();

  std::ifstream in(args.trace, std::ios::binary);
  if (!in) {
    throw ConfigError(args.trace + ": cannot open file");
  }
  const CsvTable table = read_csv(in, args.trace);
  const std::vector<RecordedSample> samples = read_trace(table, scenario.vehicle.propulsor_count(), args.trace);
  if (args.scenario.empty() && samples.size() > 1) {
    scenario.pipeline.control_dt = samples[1].time - samples[0].time;
  }

  supervisor::CpiPipeline pipeline(scenario.vehicle, scenario.pipeline);
  supervisor::Supervisor sup(scenario.debounce, scenario.fixed_mode.value_or(supervisor::Mode::kM1));
  std::vector<ReportRow> rows;
  rows.reserve(samples.size());
  for (const RecordedSample& s : samples) {
    const supervisor::CpiPipeline::Output o = pipeline.step(s.time, s.measurement, s.thrust);
    ReportRow row{s.time, o.reported, o.report, sup.mode(), false};
    if (!scenario.fixed_mode) {
      const supervisor::ModeDecision d = sup.update(o.report, s.time);
      row.mode = d.mode;
      row.loc_imminent = d.loc_imminent;
    }
    rows.push_back(std::move(row));
  }
  {
    std::ofstream f = open_output(args.out);
    write_reports(f, rows);
  }
  out << "samples: " << rows.size() << "\n";
  out << "reports: " << args.out << "\n";
  for (const supervisor::Transition& t : sup.state().transition_log) {
    out << "switch: " << format_double(t.time) << " " << supervisor::mode_name(t.from) << " -> "
        << supervisor::mode_name(t.to) << "\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Control authority and performance monitoring for multicopters"};
  app.require_subcommand(1);

  AcaiArgs acai;
  CLI::App* acai_cmd = app.add_subcommand("acai", "ACAI, DoC and max ACAI of one disturbance");
  acai_cmd->add_option("--vehicle", acai.vehicle, "Vehicle JSON file")->required();
  acai_cmd->add_option("--subsystem", acai.subsystem, "lateral, basic or degraded")->capture_default_str();
  acai_cmd->add_option("--d", acai.d, "Lumped disturbance components")->required()->delimiter(',');
  acai_cmd->add_option("--psi", acai.psi, "Yaw reference for the lateral set, rad");

  SimulateArgs sim;
  std::uint64_t sim_seed = 0;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Closed-loop run with the switching supervisor");
  sim_cmd->add_option("--scenario", sim.scenario, "Scenario JSON file")->required();
  sim_cmd->add_option("--out", sim.out_dir, "Output directory")->capture_default_str();
  CLI::Option* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "Override the scenario seed");

  SweepArgs sweep;
  std::uint64_t sweep_seed = 0;
  std::size_t workers = 0;
  int nd = 0;
  double dsigma = 0.0;
  double synthetic = 0.0;
  std::string family;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Threshold determination over a disturbance grid");
  sweep_cmd->add_option("--scenario", sweep.scenario, "Scenario JSON file (gains and sweep settings)");
  sweep_cmd->add_option("--vehicle", sweep.vehicle, "Vehicle JSON file when no scenario is given");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->capture_default_str();
  CLI::Option* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Seed (the sweep itself is deterministic)");
  CLI::Option* workers_opt = sweep_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  CLI::Option* nd_opt = sweep_cmd->add_option("--nd", nd, "Grid points per axis")->check(CLI::Range(2, 1000));
  CLI::Option* dsigma_opt = sweep_cmd->add_option("--dsigma", dsigma, "Bucket width")->check(CLI::Range(1e-6, 1.0));
  CLI::Option* synthetic_opt =
      sweep_cmd->add_option("--synthetic-threshold", synthetic, "Judge points stable iff sigma >= value");
  CLI::Option* family_opt = sweep_cmd->add_option("--family", family, "lateral, basic or degraded");
  sweep_cmd->add_flag("--judge-uncontrollable", sweep.judge_uncontrollable, "Simulate sigma = 0 points too");

  ReplayArgs replay;
  double th_b = 0.0, th_d = 0.0, th_l = 0.0;
  CLI::App* replay_cmd = app.add_subcommand("replay", "Recompute estimates and indices from a recorded trace");
  replay_cmd->add_option("--trace", replay.trace, "Trace CSV")->required();
  replay_cmd->add_option("--vehicle", replay.vehicle, "Vehicle JSON file");
  replay_cmd->add_option("--scenario", replay.scenario, "Scenario JSON with estimator and threshold settings");
  replay_cmd->add_option("--out", replay.out, "Output CSV")->capture_default_str();
  CLI::Option* th_b_opt = replay_cmd->add_option("--sigma-th-basic", th_b, "Basic threshold");
  CLI::Option* th_d_opt = replay_cmd->add_option("--sigma-th-degraded", th_d, "Degraded threshold");
  CLI::Option* th_l_opt = replay_cmd->add_option("--sigma-th-lateral", th_l, "Lateral threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*acai_cmd) {
      return cmd_acai(acai, std::cout);
    }
    if (*sim_cmd) {
      if (*sim_seed_opt) sim.seed = sim_seed;
      return cmd_simulate(sim, std::cout);
    }
    if (*sweep_cmd) {
      if (*sweep_seed_opt) sweep.seed = sweep_seed;
      if (*workers_opt) sweep.workers = workers;
      if (*nd_opt) sweep.nd = nd;
      if (*dsigma_opt) sweep.dsigma = dsigma;
      if (*synthetic_opt) sweep.synthetic_threshold = synthetic;
      if (*family_opt) sweep.family = family;
      return cmd_sweep(sweep, std::cout);
    }
    if (*replay_cmd) {
      if (*th_b_opt) replay.sigma_th_basic = th_b;
      if (*th_d_opt) replay.sigma_th_degraded = th_d;
      if (*th_l_opt) replay.sigma_th_lateral = th_l;
      return cmd_replay(replay, std::cout);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace copter_cpi::cli
