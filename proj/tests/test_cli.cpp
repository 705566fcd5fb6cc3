#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "copter_cpi/cli/commands.hpp"
#include "copter_cpi/cli/config.hpp"
#include "copter_cpi/cli/csv.hpp"
#include "copter_cpi/cli/json_source.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "support.hpp"

using namespace copter_cpi;
using namespace copter_cpi::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(COPTER_CPI_SOURCE_DIR) / "configs";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("copter_cpi_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

CsvTable read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return read_csv(in, path.string());
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& ex) {
    return ex.what();
  }
  return "";
}

std::string short_scenario(const std::string& extra) {
  return "{\n  \"name\": \"short\",\n  \"vehicle\": \"" + (kConfigs / "vehicles" / "hexacopter.json").string() +
         "\",\n  \"duration\": 4,\n  \"seed\": 9" + extra + "\n}\n";
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("malformed json reports the line") {
    const std::string err = error_of([] { JsonSource::parse("{\n  \"a\": 1,\n  \"b\": ]\n}", "x.json"); });
    CHECK(err.find("x.json:3") != std::string::npos);
    CHECK(err.find("malformed JSON") != std::string::npos);
  }

  TEST_CASE("vehicle errors point at the offending line") {
    const std::string wrong_type =
        "{\n\"m_a\": 1.2,\n\"J\": \"heavy\",\n\"n_P\": 4,\n\"arm_length\": 0.2,\n\"torque_coeff\": 0.02,\n"
        "\"spin_dirs\": [1,-1,1,-1],\n\"azimuths\": [0,1,2,3],\n\"K\": 6,\n\"phi_max\": 0.5,\n\"theta_max\": 0.5\n}";
    std::string err = error_of([&] { vehicle_from_json(JsonSource::parse(wrong_type, "v.json")); });
    CHECK(err.find("v.json:3") != std::string::npos);
    CHECK(err.find("'J'") != std::string::npos);

    const std::string unknown = "{\n\"m_a\": 1.2,\n\"mass\": 3\n}";
    err = error_of([&] { vehicle_from_json(JsonSource::parse(unknown, "v.json")); });
    CHECK(err.find("v.json:3") != std::string::npos);
    CHECK(err.find("unknown key 'mass'") != std::string::npos);

    err = error_of([] { vehicle_from_json(JsonSource::parse("{\n\"n_P\": 4\n}", "v.json")); });
    CHECK(err.find("missing required key") != std::string::npos);

    const std::string short_array =
        "{\n\"m_a\": 1.2,\n\"J\": [1, 1, 1],\n\"n_P\": 4,\n\"arm_length\": 0.2,\n\"torque_coeff\": 0.02,\n"
        "\"spin_dirs\": [1,-1,1],\n\"azimuths\": [0,1,2,3],\n\"K\": 6,\n\"phi_max\": 0.5,\n\"theta_max\": 0.5\n}";
    err = error_of([&] { vehicle_from_json(JsonSource::parse(short_array, "v.json")); });
    CHECK(err.find("v.json:7") != std::string::npos);
  }

  TEST_CASE("shipped vehicles match the built-in defaults") {
    const auto pairs = {std::pair{load_vehicle((kConfigs / "vehicles" / "hexacopter.json").string()),
                                  vehicle::default_hexacopter()},
                        std::pair{load_vehicle((kConfigs / "vehicles" / "quad.json").string()), vehicle::default_quad()}};
    for (const auto& [loaded, builtin] : pairs) {
      CHECK(loaded.mass == builtin.mass);
      CHECK(loaded.inertia == builtin.inertia);
      CHECK(loaded.max_thrust == builtin.max_thrust);
      CHECK(loaded.spin_dirs == builtin.spin_dirs);
      CHECK((loaded.azimuths - builtin.azimuths).norm() < 1e-12);
      CHECK(loaded.phi_max == builtin.phi_max);
    }
  }

  TEST_CASE("shipped scenarios load") {
    for (const auto& entry : fs::directory_iterator(kConfigs / "scenarios")) {
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load_scenario(entry.path().string()));
    }
    const ScenarioConfig fig2 = load_scenario((kConfigs / "scenarios" / "fig2.json").string());
    CHECK(fig2.scenario.fault.eta(1) == 1.0);
    CHECK(fig2.scenario.fault.onset_time == 5.0);
    CHECK(fig2.scenario.duration == 20.0);
    CHECK(fig2.trace_file == "fig2_trace.csv");
  }

  TEST_CASE("scenario errors") {
    const fs::path dir = scratch("scenario_errors");
    write_file(dir / "bad_vehicle.json", "{\n\"vehicle\": \"nowhere.json\"\n}\n");
    CHECK(error_of([&] { load_scenario((dir / "bad_vehicle.json").string()); }).find("does not exist") !=
          std::string::npos);
    write_file(dir / "late.json", short_scenario(",\n  \"payload\": [{\"time\": 9, \"mass\": 0.1}]"));
    const std::string err = error_of([&] { load_scenario((dir / "late.json").string()); });
    CHECK(err.find("late.json:6") != std::string::npos);
    CHECK(err.find("within the duration") != std::string::npos);
    CHECK_THROWS_AS(parse_subsystem("yaw"), Error);
  }

  TEST_CASE("doubles survive formatting exactly") {
    testsupport::Gen gen(91);
    for (int k = 0; k < 2000; ++k) {
      const double v = gen.normal() * std::pow(10.0, gen.integer(-12, 12));
      const std::string s = format_double(v);
      double back = 0.0;
      std::from_chars(s.data(), s.data() + s.size(), back);
      CHECK(back == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
  }

  TEST_CASE("csv quoting round trip") {
    std::ostringstream out;
    const std::vector<std::string> header{"a", "b", "c"};
    const std::vector<std::string> row{"plain", "with, comma", "say \"hi\"\nbye"};
    write_csv_row(out, header);
    write_csv_row(out, row);
    const std::string text = out.str();
    CHECK(text.substr(0, 7) == "a,b,c\r\n");
    CHECK(text.find("\"say \"\"hi\"\"\nbye\"") != std::string::npos);
    std::istringstream in(text);
    const CsvTable t = read_csv(in, "mem");
    CHECK(t.header == header);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == row);
    CHECK(t.column("b") == 1);
    CHECK(t.column("z") == -1);
  }

  TEST_CASE("csv errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty, "e.csv"), ConfigError);
    std::istringstream ragged("a,b\r\n1\r\n");
    CHECK(error_of([&] { read_csv(ragged, "r.csv"); }).find("r.csv:2") != std::string::npos);
    std::istringstream open("a\r\n\"x\r\n");
    CHECK_THROWS_AS(read_csv(open, "o.csv"), ConfigError);
    std::istringstream partial("time,meas_x\r\n0,0\r\n");
    const CsvTable t = read_csv(partial, "p.csv");
    const std::string err = error_of([&] { read_trace(t, 6, "p.csv"); });
    CHECK(err.find("missing columns") != std::string::npos);
    CHECK(err.find("meas_theta") != std::string::npos);
    CHECK(err.find("f_5") != std::string::npos);
  }

  TEST_CASE("simulate then replay reproduces the index sequence") {
    const fs::path dir = scratch("replay");
    write_file(dir / "s.json", short_scenario(",\n  \"fault\": {\"eta\": [0, 1, 0, 0, 0, 0], \"onset_time\": 1.5}"));
    std::ostringstream log;
    REQUIRE(cmd_simulate(SimulateArgs{(dir / "s.json").string(), dir.string(), std::nullopt}, log) == 0);
    CHECK(log.str().find("switch: ") != std::string::npos);
    ReplayArgs ra;
    ra.trace = (dir / "short_trace.csv").string();
    ra.vehicle = (kConfigs / "vehicles" / "hexacopter.json").string();
    ra.scenario = (dir / "s.json").string();
    ra.out = (dir / "replay.csv").string();
    REQUIRE(cmd_replay(ra, log) == 0);
    const CsvTable trace = read_file(dir / "short_trace.csv");
    const CsvTable replay = read_file(dir / "replay.csv");
    REQUIRE(trace.rows.size() == replay.rows.size());
    for (const char* col : {"S_l", "S_b", "S_d", "sigma_b", "dhat_b_1", "mode"}) {
      const int a = trace.column(col), b = replay.column(col);
      REQUIRE(a >= 0);
      REQUIRE(b >= 0);
      for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        if (std::string(col) == "mode") {
          CHECK(trace.rows[i][a] == replay.rows[i][b]);
        } else {
          CHECK(std::stod(trace.rows[i][a]) == doctest::Approx(std::stod(replay.rows[i][b])).epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("payload step lowers the replayed basic index") {
    const fs::path dir = scratch("payload");
    write_file(dir / "s.json", short_scenario(",\n  \"payload\": [{\"time\": 2, \"mass\": 0.8}]"));
    std::ostringstream log;
    REQUIRE(cmd_simulate(SimulateArgs{(dir / "s.json").string(), dir.string(), std::nullopt}, log) == 0);
    ReplayArgs ra;
    ra.trace = (dir / "short_trace.csv").string();
    ra.vehicle = (kConfigs / "vehicles" / "hexacopter.json").string();
    ra.out = (dir / "replay.csv").string();
    REQUIRE(cmd_replay(ra, log) == 0);
    const CsvTable t = read_file(dir / "replay.csv");
    const int tc = t.column("time"), sc = t.column("S_b");
    double before = 0.0, after = 0.0;
    int nb = 0, na = 0;
    for (const auto& row : t.rows) {
      const double time = std::stod(row[tc]);
      if (time > 1.0 && time < 2.0) before += std::stod(row[sc]), ++nb;
      if (time > 3.0) after += std::stod(row[sc]), ++na;
    }
    CHECK(after / na < before / nb - 0.05);
  }

  TEST_CASE("acai command output") {
    std::ostringstream out;
    AcaiArgs a;
    a.vehicle = (kConfigs / "vehicles" / "hexacopter.json").string();
    a.subsystem = "lateral";
    a.d = {0.0, 0.0};
    REQUIRE(cmd_acai(a, out) == 0);
    CHECK(out.str().find("sigma: 1\n") != std::string::npos);
    std::ostringstream far;
    a.subsystem = "basic";
    a.d = {200.0, 0.0, 0.0, 0.0};
    REQUIRE(cmd_acai(a, far) == 0);
    CHECK(far.str().find("sigma: 0\n") != std::string::npos);
    CHECK(far.str().find("argmin_partition: ") != std::string::npos);
  }

  TEST_CASE("run reports bad input with a nonzero exit") {
    const std::string vehicle = (kConfigs / "vehicles" / "hexacopter.json").string();
    std::vector<std::string> args{"copter-cpi", "acai", "--vehicle", vehicle, "--subsystem", "basic", "--d", "1"};
    std::vector<char*> argv;
    for (auto& s : args) argv.push_back(s.data());
    CHECK(run(static_cast<int>(argv.size()), argv.data()) != 0);
    std::vector<std::string> missing{"copter-cpi", "simulate", "--scenario", "/nonexistent/file.json"};
    argv.clear();
    for (auto& s : missing) argv.push_back(s.data());
    CHECK(run(static_cast<int>(argv.size()), argv.data()) != 0);
    std::vector<std::string> empty_trace{"copter-cpi", "replay", "--trace", "/dev/null", "--vehicle", vehicle};
    argv.clear();
    for (auto& s : empty_trace) argv.push_back(s.data());
    CHECK(run(static_cast<int>(argv.size()), argv.data()) != 0);
  }
}
