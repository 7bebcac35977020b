#include "dkbound/bench/runner.hpp"

#include "dkbound/fracprog.hpp"
#include "dkbound/models.hpp"
#include "dkbound/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace dkbound::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
  if (std::isnan(x)) return "na";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Failure text goes into a CSV cell unquoted.
std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

struct CellInputs {
  std::vector<std::pair<SymmetricMatrix, SymmetricMatrix>> pairs;
  int degree_extreme_difference = -1;
  int attempts = 1;
};

CellInputs build_inputs(const Scenario& s, int sweep_value, int replicate) {
  const std::uint64_t seed = Stream::derive(s.master_seed, s.id, static_cast<std::uint64_t>(sweep_value),
                                            static_cast<std::uint64_t>(replicate))
                                 .key();
  CellInputs in;
  if (s.family == Family::Pca) {
    const int p = s.sweep == "p" ? sweep_value : s.fixed;
    const int N = s.sweep == "p" ? s.fixed : sweep_value;
    const auto params = SpikedCovParams::equal(p, s.K, s.p_within, s.p_between, N);
    SymmetricMatrix sigma = spiked_covariance(params);
    SymmetricMatrix sigma_hat = sample_covariance(sigma, N, seed);
    in.pairs.emplace_back(std::move(sigma_hat), std::move(sigma));
    return in;
  }
  const auto params = SbmParams::equal(sweep_value, s.K, s.p_within, s.p_between);
  auto drawn = sample_sbm_resampling(params, seed, s.max_resample);
  in.attempts = drawn.attempts;
  in.degree_extreme_difference = degree_extreme_difference(drawn.ops);
  const GraphOperators& g = drawn.ops;
  if (s.family == Family::Gso) {
    in.pairs.emplace_back(g.A, g.L);
    in.pairs.emplace_back(g.L, g.L_sym);
    in.pairs.emplace_back(g.A, g.L_sym);
  } else {
    GeneratingMatrices b = generating_matrices(params);
    in.pairs.emplace_back(g.A, std::move(b.B_A));
    in.pairs.emplace_back(g.L, std::move(b.B_L));
    in.pairs.emplace_back(g.L_sym, std::move(b.B_Lsym));
  }
  return in;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::vector<ResultRow> run_cell(const Scenario& s, int sweep_value, int replicate) {
  const auto defs = s.comparisons();
  std::vector<ResultRow> rows(defs.size());
  for (std::size_t i = 0; i < defs.size(); ++i) {
    rows[i].scenario = s.id;
    rows[i].replicate = replicate;
    rows[i].sweep_value = sweep_value;
    rows[i].comparison_index = static_cast<int>(i);
    rows[i].comparison = defs[i].label;
  }
  const auto t0 = std::chrono::steady_clock::now();
  CellInputs in;
  try {
    in = build_inputs(s, sweep_value, replicate);
  } catch (const std::exception& e) {
    for (auto& row : rows) {
      row.failed = true;
      row.failure = sanitize(e.what());
      row.wall_time_ms = elapsed_ms(t0);
    }
    return rows;
  }
  const double setup_ms = elapsed_ms(t0);
  for (std::size_t i = 0; i < defs.size(); ++i) {
    ResultRow& row = rows[i];
    row.degree_extreme_difference = in.degree_extreme_difference;
    row.resample_attempts = in.attempts;
    const auto t1 = std::chrono::steady_clock::now();
    try {
      const ComparisonSpec spec(in.pairs[i].first, in.pairs[i].second, s.j, s.r, defs[i].reverse_phi,
                                defs[i].reverse_psi);
      const BoundReport rep = assemble_bound(spec);
      row.extended_bound_rescaled = rep.extended_bound_rescaled;
      row.standard_feasible = rep.standard_dk_feasible;
      row.standard_dk_rescaled = rep.standard_dk_rescaled;
      row.rho1_rescaled = rep.rho1_rescaled;
      row.rho2 = rep.rho2;
      row.trivial = rep.trivial_fallback;
      row.c1_opt = rep.best_params_original.c1;
      row.c0_opt = rep.best_params_original.c0;
      row.variant = rep.trivial_fallback ? "trivial" : std::string(variant_name(rep.best.variant));
    } catch (const std::exception& e) {
      row.failed = true;
      row.failure = sanitize(e.what());
    }
    row.wall_time_ms = setup_ms / static_cast<double>(defs.size()) + elapsed_ms(t1);
  }
  return rows;
}

std::vector<ResultRow> run_rows(const Scenario& s, const RunOptions& options) {
  s.validate();
  struct Cell {
    int sweep_value;
    int replicate;
  };
  std::vector<Cell> cells;
  for (int g : s.grid) {
    for (int k = 0; k < s.replicates; ++k) cells.push_back({g, k});
  }
  std::vector<std::vector<ResultRow>> slots(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      slots[i] = run_cell(s, cells[i].sweep_value, cells[i].replicate);
    }
  };
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(cells.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<ResultRow> rows;
  for (auto& slot : slots) {
    for (auto& row : slot) rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.sweep_value, a.replicate, a.comparison_index) <
           std::tie(b.sweep_value, b.replicate, b.comparison_index);
  });
  return rows;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "scenario", "sweep", "sweep_value", "replicate", "comparison",
      "extended_bound_rescaled", "standard_dk_rescaled", "rho1_rescaled", "rho2", "c1_opt",
      "c0_opt", "variant", "degree_extreme_difference", "resample_attempts", "status"};
  return cols;
}

void write_csv(std::ostream& out, const Scenario& s, const std::vector<ResultRow>& rows) {
  out << "# dkbench " << s.describe() << "\n";
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : rows) {
    out << r.scenario << "," << s.sweep << "," << r.sweep_value << "," << r.replicate << ","
        << r.comparison << ",";
    if (r.failed) {
      out << "failed,failed,failed,failed,failed,failed,failed,";
    } else {
      out << num(r.extended_bound_rescaled) << ","
          << (r.standard_feasible ? num(r.standard_dk_rescaled) : "infeasible") << ","
          << num(r.rho1_rescaled) << "," << num(r.rho2) << ","
          << (r.trivial ? "none" : num(r.c1_opt)) << "," << (r.trivial ? "none" : num(r.c0_opt))
          << "," << r.variant << ",";
    }
    if (r.degree_extreme_difference >= 0) out << r.degree_extreme_difference;
    else out << "na";
    out << "," << r.resample_attempts << "," << (r.failed ? "failed: " + r.failure : "ok") << "\n";
  }
}

void write_timings(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "scenario,sweep_value,replicate,comparison,wall_time_ms\n";
  for (const auto& r : rows) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_time_ms);
    out << r.scenario << "," << r.sweep_value << "," << r.replicate << "," << r.comparison << ","
        << buf << "\n";
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

std::vector<SummaryRow> summarize(const Scenario& s, const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  const auto defs = s.comparisons();
  for (int g : s.grid) {
    for (const auto& def : defs) {
      SummaryRow sr;
      sr.sweep_value = g;
      sr.comparison = def.label;
      std::vector<double> ext, sdk, r1, r2, c1, c0;
      for (const auto& r : rows) {
        if (r.sweep_value != g || r.comparison != def.label) continue;
        ++sr.rows;
        if (r.failed) {
          ++sr.failed;
          continue;
        }
        ext.push_back(r.extended_bound_rescaled);
        r1.push_back(r.rho1_rescaled);
        r2.push_back(r.rho2);
        if (r.standard_feasible) {
          ++sr.standard_feasible;
          sdk.push_back(r.standard_dk_rescaled);
        }
        if (!r.trivial) {
          c1.push_back(r.c1_opt);
          c0.push_back(r.c0_opt);
        }
      }
      sr.median_extended = median(ext);
      sr.median_standard = median(sdk);
      sr.median_rho1 = median(r1);
      sr.median_rho2 = median(r2);
      sr.median_c1 = median(c1);
      sr.median_c0 = median(c0);
      out.push_back(sr);
    }
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "sweep_value,comparison,rows,failed,standard_feasible,median_extended,median_standard,"
         "median_rho1,median_rho2,median_c1,median_c0\n";
  for (const auto& s : summary) {
    out << s.sweep_value << "," << s.comparison << "," << s.rows << "," << s.failed << ","
        << s.standard_feasible << "," << num(s.median_extended) << "," << num(s.median_standard)
        << "," << num(s.median_rho1) << "," << num(s.median_rho2) << "," << num(s.median_c1) << ","
        << num(s.median_c0) << "\n";
  }
}

RunFiles run_to_directory(const Scenario& s, const std::string& out_dir, const RunOptions& options,
                          std::vector<SummaryRow>* summary) {
  const auto rows = run_rows(s, options);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  RunFiles files{(dir / (s.id + ".csv")).string(), (dir / (s.id + ".timings.csv")).string(),
                 (dir / (s.id + ".summary.csv")).string()};
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
  };
  std::ostringstream csv, timings, sum;
  write_csv(csv, s, rows);
  write_timings(timings, rows);
  const auto sr = summarize(s, rows);
  write_summary(sum, sr);
  write(files.csv, csv.str());
  write(files.timings, timings.str());
  write(files.summary, sum.str());
  if (summary) *summary = sr;
  return files;
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::runtime_error("csv has no column '" + name + "'");
  return static_cast<int>(it - columns.begin());
}

CsvTable read_csv_table(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (t.header_comment.empty()) t.header_comment = line;
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw std::runtime_error("malformed csv: line " + std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " fields, expected " +
                               std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.columns.empty()) throw std::runtime_error("malformed csv: no header line");
  return t;
}

}  // namespace dkbound::bench
