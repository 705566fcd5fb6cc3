#include "copter_cpi/cli/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "copter_cpi/cli/json_source.hpp"

namespace copter_cpi::cli {

namespace {

void append_vector(std::vector<std::string>& fields, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    fields.push_back(format_double(v(i)));
  }
}

void append_indexed(std::vector<std::string>& names, const std::string& prefix, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    names.push_back(prefix + std::to_string(i));
  }
}

void append_report(std::vector<std::string>& f, const perf::SubsystemEstimates& est, const perf::CpiReport& r,
                   supervisor::Mode mode, bool loc) {
  append_vector(f, est.lateral);
  append_vector(f, est.basic);
  append_vector(f, est.degraded);
  for (double v : {r.sigma_l, r.sigma_b, r.sigma_d, r.S_l, r.S_b, r.S_d}) {
    f.push_back(format_double(v));
  }
  f.emplace_back(supervisor::mode_name(mode));
  for (bool b : {r.safe_l, r.safe_b, r.safe_d, loc}) {
    f.push_back(b ? "1" : "0");
  }
}

std::vector<std::string> report_columns() {
  std::vector<std::string> h;
  append_indexed(h, "dhat_l_", 2);
  append_indexed(h, "dhat_b_", 4);
  append_indexed(h, "dhat_d_", 3);
  for (const char* c : {"sigma_l", "sigma_b", "sigma_d", "S_l", "S_b", "S_d", "mode", "safe_l", "safe_b", "safe_d",
                        "loc_imminent"}) {
    h.emplace_back(c);
  }
  return h;
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') {
        out << '"';
      }
      out << c;
    }
    out << '"';
  }
  out << "\r\n";
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

CsvTable read_csv(std::istream& in, const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && in.peek() == '\n') {
        in.get(c);
      }
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (quoted) {
    throw ConfigError(origin + ": unterminated quoted field");
  }
  if (records.empty() || (records.size() == 1 && records[0].size() == 1 && records[0][0].empty())) {
    throw ConfigError(origin + ": empty CSV file");
  }
  CsvTable table;
  table.header = std::move(records[0]);
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw ConfigError(origin + ":" + std::to_string(i + 1) + ": expected " + std::to_string(table.header.size()) +
                        " fields, found " + std::to_string(records[i].size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

std::vector<std::string> trace_header(Eigen::Index propulsors) {
  std::vector<std::string> h = {"time",     "x",      "y",      "h",      "vx",       "vy",         "vh",
                                "phi",      "theta",  "psi",    "p",      "q",        "r",          "meas_x",
                                "meas_y",   "meas_h", "meas_phi", "meas_theta", "meas_psi"};
  append_indexed(h, "f_", propulsors);
  for (std::string& c : report_columns()) {
    h.push_back(std::move(c));
  }
  return h;
}

void write_trace(std::ostream& out, const supervisor::Trace& trace, Eigen::Index propulsors) {
  write_csv_row(out, trace_header(propulsors));
  std::vector<std::string> f;
  for (const supervisor::TraceRow& row : trace.rows) {
    f.clear();
    f.push_back(format_double(row.time));
    append_vector(f, row.state.p);
    append_vector(f, row.state.v);
    append_vector(f, row.state.theta);
    append_vector(f, row.state.omega);
    append_vector(f, row.measurement.p);
    append_vector(f, row.measurement.theta);
    append_vector(f, row.thrust);
    append_report(f, row.estimates, row.report, row.mode, row.loc_imminent);
    write_csv_row(out, f);
  }
}

std::vector<std::string> report_header() {
  std::vector<std::string> h = {"time"};
  for (std::string& c : report_columns()) {
    h.push_back(std::move(c));
  }
  return h;
}

void write_reports(std::ostream& out, const std::vector<ReportRow>& rows) {
  write_csv_row(out, report_header());
  std::vector<std::string> f;
  for (const ReportRow& row : rows) {
    f.clear();
    f.push_back(format_double(row.time));
    append_report(f, row.estimates, row.report, row.mode, row.loc_imminent);
    write_csv_row(out, f);
  }
}

ReportRow report_row(const supervisor::TraceRow& row) {
  return ReportRow{row.time, row.estimates, row.report, row.mode, row.loc_imminent};
}

std::vector<RecordedSample> read_trace(const CsvTable& table, Eigen::Index propulsors, const std::string& origin) {
  std::vector<std::string> needed = {"time", "meas_x", "meas_y", "meas_h", "meas_phi", "meas_theta", "meas_psi"};
  append_indexed(needed, "f_", propulsors);
  std::vector<int> idx;
  std::string missing;
  for (const std::string& name : needed) {
    const int i = table.column(name);
    if (i < 0) {
      missing += (missing.empty() ? "" : ", ") + name;
    }
    idx.push_back(i);
  }
  if (!missing.empty()) {
    throw ConfigError(origin + ": trace schema mismatch, missing columns: " + missing);
  }
  if (table.rows.empty()) {
    throw ConfigError(origin + ": trace has no samples");
  }
  std::vector<RecordedSample> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::vector<std::string>& row = table.rows[r];
    const std::string where = origin + ":" + std::to_string(r + 2);
    const auto get = [&](std::size_t k) { return parse_double(row[static_cast<std::size_t>(idx[k])], where); };
    RecordedSample s;
    s.time = get(0);
    s.measurement.p = Eigen::Vector3d(get(1), get(2), get(3));
    s.measurement.theta = Eigen::Vector3d(get(4), get(5), get(6));
    s.thrust.resize(propulsors);
    for (Eigen::Index i = 0; i < propulsors; ++i) {
      s.thrust(i) = get(7 + static_cast<std::size_t>(i));
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_sweep_points(std::ostream& out, const threshold::DisturbanceGrid& grid,
                        const threshold::ThresholdResult& result) {
  std::vector<std::string> h = {"grid_index"};
  append_indexed(h, "d_", grid.dim());
  for (const char* c : {"sigma", "judged", "stable", "max_error_tail"}) {
    h.emplace_back(c);
  }
  write_csv_row(out, h);
  std::vector<std::string> f;
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const threshold::PointResult& p = result.points[i];
    f.clear();
    f.push_back(std::to_string(i));
    append_vector(f, grid.point(i));
    f.push_back(format_double(p.sigma));
    f.push_back(p.judged ? "1" : "0");
    f.push_back(p.judgment.stable ? "1" : "0");
    f.push_back(format_double(p.judgment.max_error_tail));
    write_csv_row(out, f);
  }
}

void write_buckets(std::ostream& out, const threshold::BucketReport& report) {
  write_csv_row(out, {"bucket", "total", "stable", "percentage", "judged", "searched"});
  for (const threshold::BucketRow& row : report.rows) {
    write_csv_row(out, {row.label, std::to_string(row.total), std::to_string(row.stable), format_double(row.percentage),
                        std::to_string(row.judged), row.searched ? "1" : "0"});
  }
}

}  // namespace copter_cpi::cli
