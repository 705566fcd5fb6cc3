#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "copter_cpi/supervisor/closed_loop.hpp"
#include "copter_cpi/threshold/sweep.hpp"

namespace copter_cpi::cli {

/// Shortest text that parses back to the same double.
std::string format_double(double value);

/// Writes one RFC 4180 record, quoting fields that need it.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index or -1.
  int column(const std::string& name) const;
};

/// Parses RFC 4180 text with a header row. Throws ConfigError on an empty
/// input or ragged rows.
CsvTable read_csv(std::istream& in, const std::string& origin);

std::vector<std::string> trace_header(Eigen::Index propulsors);
void write_trace(std::ostream& out, const supervisor::Trace& trace, Eigen::Index propulsors);

/// One CPI row: estimates as assessed, indices, mode and flags.
struct ReportRow {
  double time = 0.0;
  perf::SubsystemEstimates estimates;
  perf::CpiReport report;
  supervisor::Mode mode = supervisor::Mode::kM1;
  bool loc_imminent = false;
};

std::vector<std::string> report_header();
void write_reports(std::ostream& out, const std::vector<ReportRow>& rows);
ReportRow report_row(const supervisor::TraceRow& row);

/// Recorded inputs needed to re-run estimation.
struct RecordedSample {
  double time = 0.0;
  supervisor::Measurement measurement;
  Eigen::VectorXd thrust;
};

/// Throws ConfigError listing every missing column when the table does not
/// carry the trace schema.
std::vector<RecordedSample> read_trace(const CsvTable& table, Eigen::Index propulsors, const std::string& origin);

void write_sweep_points(std::ostream& out, const threshold::DisturbanceGrid& grid,
                        const threshold::ThresholdResult& result);
void write_buckets(std::ostream& out, const threshold::BucketReport& report);

}  // namespace copter_cpi::cli
