#pragma once

// Named verification scenarios over the library and the report they produce.
//
// A report body is a pure function of the configuration: wall times are kept
// in the records but never written by emit_report.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biform/errors.hpp"
#include "biform/kernels.hpp"

namespace biform {

/// Bad flags, bad config values, unknown scenarios. Exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Unreadable config or unwritable output. Exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class ReportFormat { JsonLines, Csv, Human };
ReportFormat parse_format(const std::string& s);
const char* format_name(ReportFormat f);

struct RunConfig {
  std::vector<std::string> scenarios;  // empty: all, in declaration order
  std::uint64_t seed = 20240607;
  DiffMode mode = DiffMode::TaylorJet;
  double fd_step = 1e-4;
  double identity_tol = 1e-9;
  double classify_tol = -1.0;  // < 0: 1e-7 with jets, 1e-4 with differences
  int probes = 20;
  int forms = 50;
  int tuples = 100;
  std::string out = "-";
  ReportFormat format = ReportFormat::Human;
  bool parallel = false;

  DiffContext context() const;
  Execution execution() const { return parallel ? Execution::Parallel : Execution::Serial; }
  double effective_classify_tol() const;
  /// UsageError on out-of-range values or unknown scenarios.
  void validate() const;
};

/// Overlays a JSON document (see README) onto cfg. UsageError on unknown keys
/// or wrong types.
void apply_config_json(RunConfig& cfg, const std::string& text);
/// IoError if the file cannot be read.
void apply_config_file(RunConfig& cfg, const std::string& path);

const std::vector<std::string>& scenario_names();

enum class Bound { Upper, Lower };

struct ResidualRow {
  std::string name;
  SweepStats stats;
  double tol;
  Bound bound;  // Upper: max < tol passes. Lower: max > tol passes.
  bool pass;
};

struct ClassificationRow {
  std::string label;
  std::string expected;
  std::string actual;
  bool pass;
};

struct ScenarioRecord {
  std::string name;
  std::vector<ResidualRow> residuals;
  std::vector<ClassificationRow> classifications;
  std::vector<std::string> errors;
  bool pass = false;
  double wall_seconds = 0.0;
};

struct Report {
  RunConfig config;
  std::vector<ScenarioRecord> scenarios;
  bool pass() const;
};

/// UsageError for an unknown name. Library errors inside the scenario are
/// caught and recorded; the verdict is then FAIL.
ScenarioRecord run_scenario(const std::string& name, const RunConfig& cfg);
Report run_suite(const RunConfig& cfg);

/// Scientific notation with 12 significant digits, locale independent.
std::string format_number(double x);

void emit_report(const Report& report, ReportFormat format, std::ostream& out);
/// "-" writes to stdout. IoError when the file cannot be written.
void emit_report(const Report& report, ReportFormat format, const std::string& path);

/// 0 all PASS, 1 any FAIL.
int exit_code(const Report& report);

}  // namespace biform
