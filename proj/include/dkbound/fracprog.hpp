#pragma once

#include "dkbound/dkcore.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dkbound {

/// (y1, y2, t) = (c1, c0, 1) / ||c1 Phi + c0 I - Psi||_2.
struct CharnesCooperPoint {
  double y1 = 0.0;
  double y2 = 0.0;
  double t = 0.0;
};

/// Throws std::domain_error when the transform reproduces Psi exactly (zero
/// norm): the bound is 0 and there is no finite point.
CharnesCooperPoint to_charnes_cooper(const TransformParams& p, const ComparisonSpec& spec);
TransformParams from_charnes_cooper(const CharnesCooperPoint& y);

enum class SolverKind { CharnesCooper, Dinkelbach, Oracle };
std::string_view solver_name(SolverKind k);

enum class SolveStatus {
  Optimal,
  ExactMatch,          // Psi is an affine image of Phi; objective 0
  SupremumAtInfinity,  // boundary block, infimum 1 approached as |c0| grows
  AboveTrivial,        // no admissible transform gets below 1; reported as 1
  Infeasible,
  Stalled,             // iteration cap hit; gap recorded
};
std::string_view status_name(SolveStatus s);

struct TraceLine {
  int iteration = 0;
  double incumbent = 0.0;
  double lp_value = 0.0;
  int cuts = 0;
  double lambda = 0.0;
};

/// One line per entry: "iter=<k> incumbent=<v> lp=<v> cuts=<k> lambda=<v>",
/// numbers printed with %.10g.
std::string format_trace(const std::vector<TraceLine>& trace);

/// Objective values of 1 or more never improve on the trivial bound, so the
/// solvers only resolve the optimum below 1. A subproblem whose infimum is at
/// least 1 is reported with objective 1, feasible == false and status
/// SupremumAtInfinity (boundary blocks, where 1 is the limit as |c0| grows)
/// or AboveTrivial (interior blocks).
struct SubproblemSolution {
  DeltaVariant variant = DeltaVariant::D1Plus;
  TransformParams params;  // effective (possibly reversed) coordinates
  double objective_unscaled = kInf;
  bool feasible = false;
  SolverKind solver = SolverKind::CharnesCooper;
  SolveStatus status = SolveStatus::Infeasible;
  int iterations = 0;
  double gap = 0.0;  // master upper bound minus incumbent, in the solver's own units
  double strictness_margin = 0.0;
  std::vector<double> lambda_trace;      // Dinkelbach only
  std::vector<double> parametric_trace;  // F(lambda_k), Dinkelbach only
  std::vector<TraceLine> trace;
  std::string diagnostic;
};

struct SolveOptions {
  int max_iterations = 3000;
  /// Stop when master bound - incumbent <= gap_tol * (1 + incumbent).
  double gap_tol = 1e-10;
  bool record_trace = false;
};

SubproblemSolution solve_charnes_cooper(const ComparisonSpec& spec, DeltaVariant variant,
                                        const SolveOptions& options = {});

struct DinkelbachOptions {
  int max_outer = 100;
  /// Outer stop: |F(lambda)| <= outer_tol * (1 + lambda).
  double outer_tol = 1e-9;
  int max_inner = 3000;
  bool record_trace = false;
};

/// Parametric route. `init` only seeds the norm under-estimator cuts; the
/// lambda sequence starts from 0 (or from 1 for boundary blocks, where the
/// first parametric problem is unbounded).
SubproblemSolution solve_dinkelbach(const ComparisonSpec& spec, DeltaVariant variant,
                                    std::optional<TransformParams> init = std::nullopt,
                                    const DinkelbachOptions& options = {});

struct OracleGrid {
  int c1_points = 200;  // per sign, log-spaced
  double c1_min = 1e-3;
  double c1_max = 1e3;
  /// Grid is centred on ||Psi|| / ||Phi|| instead of 1 when set.
  bool center_on_norm_ratio = true;
  int golden_iterations = 60;
};

/// Brute-force reference: for each c1 on the grid the best c0 is found
/// exactly (the ratio is linear-fractional between breakpoints), then the
/// best cell is refined by golden-section search in log c1.
SubproblemSolution solve_oracle(const ComparisonSpec& spec, DeltaVariant variant,
                                const OracleGrid& grid = {});

struct BoundOptions {
  bool check_dinkelbach = false;
  bool check_oracle = false;
  bool trace = false;
  SolveOptions cutting_plane;
};

struct BoundReport {
  int n = 0;
  int j = 0;
  int r = 0;
  double scaling_constant = 0.0;

  double extended_bound_rescaled = 1.0;  // in (0, 1]
  double extended_bound_raw = 0.0;
  double standard_dk_rescaled = kInf;    // +inf when the standard theorem does not apply
  bool standard_dk_feasible = false;
  double trivial = 1.0;
  bool trivial_fallback = true;          // no variant improved on the trivial bound

  SubproblemSolution best;
  std::array<SubproblemSolution, 4> all_solutions;
  std::vector<SubproblemSolution> dinkelbach;  // when requested
  std::vector<SubproblemSolution> oracle;      // when requested
  TransformParams best_params_original;        // in the caller's orientation

  double rho1_rescaled = 0.0;
  double rho2 = 0.0;
  std::vector<double> lambda_trace;
  std::vector<std::string> diagnostics;
};

BoundReport assemble_bound(const ComparisonSpec& spec, const BoundOptions& options = {});

/// Labeled plain-text rendering used by the CLI.
std::string format_report(const BoundReport& report);

}  // namespace dkbound
