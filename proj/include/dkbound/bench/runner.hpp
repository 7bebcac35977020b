#pragma once

#include "dkbound/bench/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dkbound::bench {

/// One bound problem of one replicate. Non-finite quantities carry a named
/// sentinel when written: "infeasible" for a standard bound whose theorem
/// does not apply, "none" for transform parameters when only the trivial
/// bound is available, "failed" everywhere when model generation failed.
struct ResultRow {
  std::string scenario;
  int replicate = 0;
  int sweep_value = 0;
  int comparison_index = 0;  // position in Scenario::comparisons(), sort key
  std::string comparison;
  bool failed = false;
  std::string failure;
  double extended_bound_rescaled = 1.0;
  bool standard_feasible = false;
  double standard_dk_rescaled = 0.0;
  double rho1_rescaled = 0.0;
  double rho2 = 0.0;
  bool trivial = false;
  double c1_opt = 0.0;
  double c0_opt = 0.0;
  std::string variant;
  int degree_extreme_difference = -1;  // -1 for PCA rows
  int resample_attempts = 1;
  double wall_time_ms = 0.0;  // written to the timings sidecar only
};

/// All rows of one (grid value, replicate) cell. Depends only on the
/// scenario parameters and the cell coordinates, never on other cells.
std::vector<ResultRow> run_cell(const Scenario& s, int sweep_value, int replicate);

struct RunOptions {
  int workers = 1;
};

/// Every cell of the scenario, sorted by (sweep value, replicate, comparison).
std::vector<ResultRow> run_rows(const Scenario& s, const RunOptions& options = {});

const std::vector<std::string>& csv_columns();

/// Header comment line, column header, then one line per row. Numbers use
/// 17 significant digits.
void write_csv(std::ostream& out, const Scenario& s, const std::vector<ResultRow>& rows);
/// Row keys plus wall_time_ms; kept apart so the main CSV stays byte-stable.
void write_timings(std::ostream& out, const std::vector<ResultRow>& rows);

struct SummaryRow {
  int sweep_value = 0;
  std::string comparison;
  int rows = 0;
  int failed = 0;
  int standard_feasible = 0;
  double median_extended = 0.0;
  double median_standard = 0.0;  // over feasible rows; NaN when none
  double median_rho1 = 0.0;
  double median_rho2 = 0.0;
  double median_c1 = 0.0;  // over rows with parameters; NaN when none
  double median_c0 = 0.0;
};

std::vector<SummaryRow> summarize(const Scenario& s, const std::vector<ResultRow>& rows);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary);

/// Median of the values (mean of the middle pair for even counts); NaN when
/// empty.
double median(std::vector<double> values);

struct RunFiles {
  std::string csv;
  std::string timings;
  std::string summary;
};

/// run_rows plus the three files `<id>.csv`, `<id>.timings.csv` and
/// `<id>.summary.csv` under `out_dir` (created if missing).
RunFiles run_to_directory(const Scenario& s, const std::string& out_dir,
                          const RunOptions& options, std::vector<SummaryRow>* summary = nullptr);

/// Rows parsed back from a CSV written by write_csv. Throws
/// std::runtime_error on a malformed file.
struct CsvTable {
  std::string header_comment;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
};
CsvTable read_csv_table(std::istream& in);

}  // namespace dkbound::bench
