#include "dkbound/bench/plot.hpp"
#include "dkbound/bench/runner.hpp"
#include "dkbound/bench/scenario.hpp"
#include "dkbound/fracprog.hpp"
#include "dkbound/matrix_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace dkbound;

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

nlohmann::json solution_json(const SubproblemSolution& s) {
  return {{"variant", variant_name(s.variant)},
          {"solver", solver_name(s.solver)},
          {"status", status_name(s.status)},
          {"objective_unscaled", number(s.objective_unscaled)},
          {"feasible", s.feasible},
          {"c1", number(s.params.c1)},
          {"c0", number(s.params.c0)},
          {"iterations", s.iterations},
          {"gap", number(s.gap)},
          {"strictness_margin", number(s.strictness_margin)},
          {"diagnostic", s.diagnostic}};
}

nlohmann::json report_json(const BoundReport& r) {
  nlohmann::json j = {{"n", r.n},
                      {"j", r.j},
                      {"r", r.r},
                      {"scaling_constant", r.scaling_constant},
                      {"extended_bound_rescaled", number(r.extended_bound_rescaled)},
                      {"extended_bound_raw", number(r.extended_bound_raw)},
                      {"standard_dk_rescaled",
                       r.standard_dk_feasible ? number(r.standard_dk_rescaled) : nlohmann::json("infeasible")},
                      {"trivial", r.trivial},
                      {"trivial_fallback", r.trivial_fallback},
                      {"rho1_rescaled", number(r.rho1_rescaled)},
                      {"rho2", number(r.rho2)},
                      {"best", solution_json(r.best)},
                      {"best_params_original",
                       {{"c1", number(r.best_params_original.c1)}, {"c0", number(r.best_params_original.c0)}}},
                      {"lambda_trace", nlohmann::json::array()},
                      {"diagnostics", r.diagnostics}};
  for (double l : r.lambda_trace) j["lambda_trace"].push_back(number(l));
  for (const char* key : {"subproblems", "dinkelbach", "oracle"}) j[key] = nlohmann::json::array();
  for (const auto& s : r.all_solutions) j["subproblems"].push_back(solution_json(s));
  for (const auto& s : r.dinkelbach) j["dinkelbach"].push_back(solution_json(s));
  for (const auto& s : r.oracle) j["oracle"].push_back(solution_json(s));
  return j;
}

std::string num(double x) {
  if (std::isnan(x)) return "na";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extended Davis-Kahan bounds: experiment runner and single-comparison tool"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment scenario and write its CSV files");
  std::string scenario_id;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
  bool full = false;
  int workers = 1;
  std::string config;
  std::optional<int> replicates;
  std::vector<int> grid;
  run->add_option("scenario", scenario_id, "Scenario id")->required();
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--full", full, "Use the full-scale grid sizes and replicate counts");
  run->add_option("--workers", workers, "Concurrent workers")->check(CLI::PositiveNumber);
  run->add_option("--config", config, "INI file with per-scenario sections")->check(CLI::ExistingFile);
  run->add_option("--replicates", replicates, "Override the replicate count");
  run->add_option("--grid", grid, "Override the swept values")->delimiter(',');

  auto* plot = app.add_subcommand("plot", "Render a figure analogue from a run CSV as SVG");
  std::string figure_id, csv_path, plot_out;
  plot->add_option("figure", figure_id, "Figure number (1-8), figN, or scenario id")->required();
  plot->add_option("--csv", csv_path, "CSV written by run")->required();
  plot->add_option("--out", plot_out, "Output SVG path")->required();

  auto* bound = app.add_subcommand("bound", "Bound a single pair of matrices");
  std::string phi_path, psi_path, json_path;
  int j = 0, r = 1;
  bool reverse_phi = false, reverse_psi = false, check_dk = false, check_oracle = false, trace = false;
  bound->add_option("--phi", phi_path, "Phi (.mtx or CSV)")->required()->check(CLI::ExistingFile);
  bound->add_option("--psi", psi_path, "Psi (.mtx or CSV)")->required()->check(CLI::ExistingFile);
  bound->add_option("--j", j, "Block offset")->required();
  bound->add_option("--r", r, "Block size")->required();
  bound->add_flag("--reverse-phi", reverse_phi, "Count Phi's block from the top of its spectrum");
  bound->add_flag("--reverse-psi", reverse_psi, "Count Psi's block from the top of its spectrum");
  bound->add_flag("--check-dinkelbach", check_dk, "Also solve every subproblem with Dinkelbach");
  bound->add_flag("--check-oracle", check_oracle, "Also solve every subproblem with the grid oracle");
  bound->add_flag("--trace", trace, "Print solver iteration traces");
  bound->add_option("--json", json_path, "Also write the report as JSON");

  app.add_subcommand("list", "List scenario ids and their figures");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      bench::Scenario s = bench::preset(scenario_id, full);
      if (!config.empty()) bench::apply_config(s, config);
      if (seed) s.master_seed = *seed;
      if (replicates) s.replicates = *replicates;
      if (!grid.empty()) s.grid = grid;
      std::vector<bench::SummaryRow> summary;
      const auto files = bench::run_to_directory(s, out_dir, {workers}, &summary);
      std::cout << "# " << s.describe() << "\n";
      std::cout << "sweep_value comparison rows failed std_feasible med_extended med_standard med_c1 med_c0\n";
      for (const auto& row : summary) {
        std::cout << row.sweep_value << " " << row.comparison << " " << row.rows << " " << row.failed << " "
                  << row.standard_feasible << " " << num(row.median_extended) << " "
                  << num(row.median_standard) << " " << num(row.median_c1) << " " << num(row.median_c0)
                  << "\n";
      }
      std::cout << "wrote " << files.csv << ", " << files.timings << ", " << files.summary << "\n";
    } else if (plot->parsed()) {
      bench::plot_file(csv_path, bench::parse_figure_id(figure_id), plot_out);
      std::cout << "wrote " << plot_out << "\n";
    } else if (bound->parsed()) {
      const ComparisonSpec spec(io::load_symmetric(phi_path), io::load_symmetric(psi_path), j, r, reverse_phi,
                                reverse_psi);
      BoundOptions options;
      options.check_dinkelbach = check_dk;
      options.check_oracle = check_oracle;
      options.trace = trace;
      const BoundReport rep = assemble_bound(spec, options);
      std::cout << format_report(rep);
      if (trace) {
        for (const auto& s : rep.all_solutions) {
          std::cout << "trace " << variant_name(s.variant) << ":\n" << format_trace(s.trace);
        }
        for (const auto& s : rep.dinkelbach) {
          std::cout << "trace dinkelbach " << variant_name(s.variant) << ":\n" << format_trace(s.trace);
        }
      }
      if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw std::runtime_error("cannot write " + json_path);
        f << report_json(rep).dump(2) << "\n";
      }
    } else {
      for (const auto& id : bench::scenario_ids()) {
        std::cout << "fig" << bench::figure_of(id) << " " << id << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
