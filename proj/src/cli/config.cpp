#include "copter_cpi/cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <set>

namespace copter_cpi::cli {

namespace {

using json = nlohmann::json;

// Typed access to one JSON object with errors pointing at the source line.
class ObjectReader {
 public:
  ObjectReader(const JsonSource& src, std::string pointer) : src_(src), pointer_(std::move(pointer)) {
    const json& v = value();
    if (!v.is_object()) {
      src_.fail(pointer_, "expected an object");
    }
  }

  const json& value() const { return src_.root().at(json::json_pointer(pointer_)); }
  bool has(const std::string& key) const { return value().contains(key); }
  std::string at(const std::string& key) const { return pointer_ + "/" + key; }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : value().items()) {
      if (!allowed.count(item.key())) {
        src_.fail(at(item.key()), "unknown key '" + item.key() + "'");
      }
    }
  }

  void require(const std::string& key) const {
    if (!has(key)) {
      src_.fail(pointer_, "missing required key '" + key + "'");
    }
  }

  double number(const std::string& key) const {
    require(key);
    const json& v = value().at(key);
    if (!v.is_number()) {
      src_.fail(at(key), "'" + key + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      src_.fail(at(key), "'" + key + "' must be finite");
    }
    return d;
  }

  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = value().at(key);
    if (!v.is_number_integer()) {
      src_.fail(at(key), "'" + key + "' must be an integer");
    }
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = value().at(key);
    if (!v.is_number_unsigned()) {
      src_.fail(at(key), "'" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = value().at(key);
    if (!v.is_boolean()) {
      src_.fail(at(key), "'" + key + "' must be true or false");
    }
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    require(key);
    const json& v = value().at(key);
    if (!v.is_string()) {
      src_.fail(at(key), "'" + key + "' must be a string");
    }
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  Eigen::VectorXd vector(const std::string& key, Eigen::Index expected = -1) const {
    require(key);
    const json& v = value().at(key);
    if (!v.is_array()) {
      src_.fail(at(key), "'" + key + "' must be an array of numbers");
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        src_.fail(at(key) + "/" + std::to_string(i), "'" + key + "' entries must be finite numbers");
      }
      out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    if (expected >= 0 && out.size() != expected) {
      src_.fail(at(key), "'" + key + "' must have " + std::to_string(expected) + " entries, found " +
                             std::to_string(out.size()));
    }
    return out;
  }

  ObjectReader child(const std::string& key) const { return ObjectReader(src_, at(key)); }
  const JsonSource& source() const { return src_; }
  const std::string& pointer() const { return pointer_; }
  [[noreturn]] void fail(const std::string& key, const std::string& message) const { src_.fail(at(key), message); }

 private:
  const JsonSource& src_;
  std::string pointer_;
};

control::PidGains read_pid(const ObjectReader& r, const control::PidGains& base) {
  r.allow_only({"kp", "ki", "kd", "out_min", "out_max"});
  control::PidGains g = base;
  g.kp = r.number("kp", base.kp);
  g.ki = r.number("ki", base.ki);
  g.kd = r.number("kd", base.kd);
  g.out_min = r.number("out_min", base.out_min);
  g.out_max = r.number("out_max", base.out_max);
  if (g.out_min > g.out_max) {
    r.fail("out_min", "out_min must not exceed out_max");
  }
  return g;
}

control::ControllerGains read_gains(const ObjectReader& r) {
  r.allow_only({"lateral", "altitude", "roll", "pitch", "yaw", "tilt", "tilt_leak"});
  control::ControllerGains g;
  if (r.has("lateral")) g.lateral = read_pid(r.child("lateral"), g.lateral);
  if (r.has("altitude")) g.altitude = read_pid(r.child("altitude"), g.altitude);
  if (r.has("roll")) g.roll = read_pid(r.child("roll"), g.roll);
  if (r.has("pitch")) g.pitch = read_pid(r.child("pitch"), g.pitch);
  if (r.has("yaw")) g.yaw = read_pid(r.child("yaw"), g.yaw);
  if (r.has("tilt")) g.tilt = read_pid(r.child("tilt"), g.tilt);
  g.tilt_leak = r.number("tilt_leak", g.tilt_leak);
  if (g.tilt_leak < 0.0) {
    r.fail("tilt_leak", "tilt_leak must be non-negative");
  }
  return g;
}

void non_negative(const ObjectReader& r, const std::string& key, double v) {
  if (v < 0.0) {
    r.fail(key, "'" + key + "' must be non-negative");
  }
}

void read_estimator(const ObjectReader& r, supervisor::PipelineConfig& p) {
  r.allow_only({"process_noise", "walk_force", "walk_torque", "meas_noise_pos", "meas_noise_att", "noise_scale",
                "initial_d_std", "initial_torque_std", "delay", "bias"});
  estimator::EstimatorConfig& e = p.estimator;
  const std::pair<const char*, double*> fields[] = {
      {"process_noise", &e.process_noise}, {"walk_force", &e.walk_force},       {"walk_torque", &e.walk_torque},
      {"meas_noise_pos", &e.meas_noise_pos}, {"meas_noise_att", &e.meas_noise_att},
      {"noise_scale", &e.noise_scale},     {"initial_d_std", &e.initial_d_std},
      {"initial_torque_std", &e.initial_torque_std}};
  for (const auto& [key, target] : fields) {
    *target = r.number(key, *target);
    non_negative(r, key, *target);
  }
  const double delay = r.number("delay", 0.0);
  non_negative(r, "delay", delay);
  p.corrupt_lateral.delay = p.corrupt_basic.delay = p.corrupt_degraded.delay = delay;
  if (r.has("bias")) {
    const ObjectReader b = r.child("bias");
    b.allow_only({"lateral", "basic", "degraded"});
    if (b.has("lateral")) p.corrupt_lateral.bias = b.vector("lateral", 2);
    if (b.has("basic")) p.corrupt_basic.bias = b.vector("basic", 4);
    if (b.has("degraded")) p.corrupt_degraded.bias = b.vector("degraded", 3);
  }
}

perf::ThresholdSet read_thresholds(const ObjectReader& r) {
  r.allow_only({"basic", "degraded", "lateral", "confidence"});
  perf::ThresholdSet t;
  t.sigma_th_basic = r.number("basic", t.sigma_th_basic);
  t.sigma_th_degraded = r.number("degraded", t.sigma_th_degraded);
  t.sigma_th_lateral = r.number("lateral", t.sigma_th_lateral);
  t.confidence = r.number("confidence", t.confidence);
  for (const char* key : {"basic", "degraded", "lateral"}) {
    const double v = r.number(key, 0.0);
    if (!(v >= 0.0 && v < 1.0)) {
      r.fail(key, "threshold must be < 1 and non-negative");
    }
  }
  non_negative(r, "confidence", t.confidence);
  return t;
}

SweepConfig read_sweep(const ObjectReader& r) {
  r.allow_only({"family", "nd", "delta_sigma", "judge_uncontrollable", "lower", "upper", "horizon", "tail_fraction",
                "altitude_tol", "angle_tol", "lateral_tol", "synthetic_threshold"});
  SweepConfig s;
  if (r.has("family")) {
    try {
      s.family = parse_subsystem(r.string("family"));
    } catch (const Error& ex) {
      r.fail("family", ex.what());
    }
  }
  s.nd = r.integer("nd", s.nd);
  if (s.nd < 2) {
    r.fail("nd", "nd must be at least 2");
  }
  s.delta_sigma = r.number("delta_sigma", s.delta_sigma);
  if (!(s.delta_sigma > 0.0 && s.delta_sigma <= 1.0)) {
    r.fail("delta_sigma", "delta_sigma must lie in (0, 1]");
  }
  s.judge_uncontrollable = r.boolean("judge_uncontrollable", false);
  if (r.has("lower") != r.has("upper")) {
    r.fail(r.has("lower") ? "lower" : "upper", "give both 'lower' and 'upper' or neither");
  }
  if (r.has("lower")) {
    threshold::GridBounds b{r.vector("lower"), r.vector("upper")};
    if (b.lower.size() != b.upper.size()) {
      r.fail("upper", "'lower' and 'upper' must have the same length");
    }
    s.bounds = b;
  }
  s.judge.horizon = r.number("horizon", s.judge.horizon);
  s.judge.tail_fraction = r.number("tail_fraction", s.judge.tail_fraction);
  s.judge.altitude_tol = r.number("altitude_tol", s.judge.altitude_tol);
  s.judge.angle_tol = r.number("angle_tol", s.judge.angle_tol);
  s.judge.lateral_tol = r.number("lateral_tol", s.judge.lateral_tol);
  if (r.has("synthetic_threshold")) {
    s.synthetic_threshold = r.number("synthetic_threshold");
  }
  return s;
}

}  // namespace

vehicle::Subsystem parse_subsystem(const std::string& text) {
  if (text == "lateral") return vehicle::Subsystem::kLateral;
  if (text == "basic") return vehicle::Subsystem::kBasic;
  if (text == "degraded") return vehicle::Subsystem::kDegraded;
  throw Error("unknown subsystem '" + text + "' (expected lateral, basic or degraded)");
}

vehicle::VehicleParams vehicle_from_json(const JsonSource& src, const std::string& pointer) {
  const ObjectReader r(src, pointer);
  r.allow_only({"name", "m_a", "J", "g", "n_P", "arm_length", "torque_coeff", "spin_dirs", "azimuths", "K",
                "phi_max", "theta_max"});
  vehicle::VehicleParams p;
  p.name = r.string("name", "vehicle");
  p.mass = r.number("m_a");
  p.inertia = r.vector("J", 3);
  p.gravity = r.number("g", 9.81);
  r.require("n_P");
  const int np = r.integer("n_P", 0);
  if (np < 4) {
    r.fail("n_P", "n_P must be at least 4");
  }
  p.arm_length = r.number("arm_length");
  p.torque_coeff = r.number("torque_coeff");
  p.spin_dirs = r.vector("spin_dirs", np);
  p.azimuths = r.vector("azimuths", np);
  r.require("K");
  if (r.value().at("K").is_array()) {
    p.max_thrust = r.vector("K", np);
  } else {
    p.max_thrust = Eigen::VectorXd::Constant(np, r.number("K"));
  }
  p.phi_max = r.number("phi_max");
  p.theta_max = r.number("theta_max");
  try {
    p.validate();
  } catch (const Error& ex) {
    src.fail(pointer, ex.what());
  }
  return p;
}

vehicle::VehicleParams load_vehicle(const std::string& path) {
  return vehicle_from_json(JsonSource::load(path));
}

ScenarioConfig scenario_from_json(const JsonSource& src) {
  const ObjectReader r(src, "");
  r.allow_only({"name", "vehicle", "duration", "seed", "control_dt", "physics_dt", "debounce", "reference", "gains",
                "degraded_allocation", "estimator", "thresholds", "fault", "payload", "wind", "fixed_mode",
                "lateral_at_heading", "sweep", "trace_file"});
  ScenarioConfig cfg;
  supervisor::Scenario& s = cfg.scenario;
  s.name = r.string("name", "scenario");

  const std::filesystem::path vehicle_ref = r.string("vehicle");
  const std::filesystem::path base = std::filesystem::path(src.origin()).parent_path();
  const std::filesystem::path vehicle_path = vehicle_ref.is_absolute() ? vehicle_ref : base / vehicle_ref;
  if (!std::filesystem::exists(vehicle_path)) {
    r.fail("vehicle", "vehicle file '" + vehicle_path.string() + "' does not exist");
  }
  cfg.vehicle_path = vehicle_path.string();
  s.vehicle = load_vehicle(cfg.vehicle_path);

  s.duration = r.number("duration", s.duration);
  if (!(s.duration > 0.0)) {
    r.fail("duration", "duration must be positive");
  }
  s.seed = r.unsigned_integer("seed", 0);
  s.pipeline.control_dt = r.number("control_dt", s.pipeline.control_dt);
  s.physics_dt = r.number("physics_dt", s.physics_dt);
  s.debounce = r.integer("debounce", s.debounce);
  if (s.debounce < 1) {
    r.fail("debounce", "debounce must be at least 1");
  }
  s.pipeline.lateral_at_heading = r.boolean("lateral_at_heading", true);

  if (r.has("reference")) {
    const ObjectReader ref = r.child("reference");
    ref.allow_only({"x", "y", "h", "psi"});
    s.reference.position = Eigen::Vector3d(ref.number("x", 0.0), ref.number("y", 0.0), ref.number("h", 1.0));
    s.reference.psi = ref.number("psi", 0.0);
  }
  s.pipeline.psi_c = s.reference.psi;
  if (r.has("gains")) {
    s.gains = read_gains(r.child("gains"));
  }
  const std::string alloc = r.string("degraded_allocation", "healthy");
  if (alloc == "all") {
    s.degraded_allocation = control::DegradedAllocation::kAll;
  } else if (alloc == "healthy") {
    s.degraded_allocation = control::DegradedAllocation::kHealthy;
  } else {
    r.fail("degraded_allocation", "degraded_allocation must be \"all\" or \"healthy\"");
  }
  if (r.has("estimator")) {
    read_estimator(r.child("estimator"), s.pipeline);
  }
  if (r.has("thresholds")) {
    s.pipeline.thresholds = read_thresholds(r.child("thresholds"));
  }
  if (r.has("fault")) {
    const ObjectReader f = r.child("fault");
    f.allow_only({"eta", "onset_time"});
    s.fault.eta = f.vector("eta", s.vehicle.propulsor_count());
    s.fault.onset_time = f.number("onset_time", 0.0);
    for (Eigen::Index i = 0; i < s.fault.eta.size(); ++i) {
      if (!(s.fault.eta(i) >= 0.0 && s.fault.eta(i) <= 1.0)) {
        src.fail(f.at("eta") + "/" + std::to_string(i), "eta entries must lie in [0, 1]");
      }
    }
    if (s.fault.onset_time < 0.0 || s.fault.onset_time > s.duration) {
      f.fail("onset_time", "onset_time must lie within the duration");
    }
  }
  const auto read_events = [&](const char* key, auto&& each) {
    if (!r.has(key)) {
      return;
    }
    const json& list = r.value().at(key);
    if (!list.is_array()) {
      r.fail(key, std::string("'") + key + "' must be an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const ObjectReader e(src, r.at(key) + "/" + std::to_string(i));
      const double t = e.number("time");
      if (t < 0.0 || t > s.duration) {
        e.fail("time", "event time must lie within the duration");
      }
      each(e, t);
    }
  };
  read_events("payload", [&](const ObjectReader& e, double t) {
    e.allow_only({"time", "mass"});
    const double mass = e.number("mass");
    if (mass < 0.0) {
      e.fail("mass", "payload mass must be non-negative");
    }
    s.payload.push_back({t, mass});
  });
  read_events("wind", [&](const ObjectReader& e, double t) {
    e.allow_only({"time", "force", "torque"});
    supervisor::WindEvent w;
    w.time = t;
    if (e.has("force")) w.load.force = e.vector("force", 3);
    if (e.has("torque")) w.load.torque = e.vector("torque", 3);
    s.wind.push_back(w);
  });
  if (r.has("fixed_mode")) {
    try {
      s.fixed_mode = supervisor::parse_mode(r.string("fixed_mode"));
    } catch (const Error& ex) {
      r.fail("fixed_mode", ex.what());
    }
  }
  if (r.has("sweep")) {
    cfg.sweep = read_sweep(r.child("sweep"));
  }
  cfg.trace_file = r.string("trace_file", s.name + "_trace.csv");
  try {
    s.validate();
  } catch (const Error& ex) {
    src.fail("", ex.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  return scenario_from_json(JsonSource::load(path));
}

}  // namespace copter_cpi::cli
