#include "dkbound/fracprog.hpp"

#include "dkbound/cutting_plane.hpp"
#include "dkbound/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dkbound {

std::string_view solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::CharnesCooper: return "charnes-cooper";
    case SolverKind::Dinkelbach: return "dinkelbach";
    case SolverKind::Oracle: return "oracle";
  }
  return "?";
}

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::ExactMatch: return "exact-match";
    case SolveStatus::SupremumAtInfinity: return "supremum-at-infinity";
    case SolveStatus::AboveTrivial: return "above-trivial";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Stalled: return "stalled";
  }
  return "?";
}

std::string format_trace(const std::vector<TraceLine>& trace) {
  std::string out;
  char buf[256];
  for (const auto& t : trace) {
    std::snprintf(buf, sizeof buf, "iter=%d incumbent=%.10g lp=%.10g cuts=%d lambda=%.10g\n",
                  t.iteration, t.incumbent, t.lp_value, t.cuts, t.lambda);
    out += buf;
  }
  return out;
}

namespace {

// Spectrum of y1 Phi + y2 I - t Psi. Only the lower triangle is read, so the
// combination needs no explicit symmetrization.
struct PencilEig {
  Vector values;
  Matrix vectors;
  double norm() const { return std::max(std::abs(values(0)), std::abs(values(values.size() - 1))); }
};

PencilEig pencil_eig(const ComparisonSpec& s, double y1, double y2, double t, bool vectors = true) {
  Matrix m = y1 * s.phi().dense() - t * s.psi().dense();
  m.diagonal().array() += y2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed on transform residual of order " +
                         std::to_string(s.n()));
  }
  PencilEig out{es.eigenvalues(), vectors ? es.eigenvectors() : Matrix()};
  return out;
}

double residual_norm(const ComparisonSpec& s, const TransformParams& p) {
  return pencil_eig(s, p.c1, p.c0, 1.0, false).norm();
}

double min_term(const std::vector<AffineForm>& terms, double y1, double y2, double t) {
  double d = kInf;
  for (const auto& f : terms) d = std::min(d, f.homogeneous(y1, y2, t));
  return d;
}

// The part of constraint_forms that is not the sign or a separation term.
std::vector<AffineForm> overlap_forms(const ComparisonSpec& s, DeltaVariant v) {
  std::vector<AffineForm> out;
  for (const auto& nf : constraint_forms(s, v)) {
    if (nf.name != "sign" && nf.name != "delta") out.push_back(nf.form);
  }
  return out;
}

// Eigenvectors whose Rayleigh quotients seed the norm cuts: both spectra at
// the extremes and around the block edges.
std::vector<Vector> seed_directions(const ComparisonSpec& s) {
  const int n = s.n();
  std::vector<int> idx = {1, n, s.j(), s.j() + 1, s.j() + s.r(), s.j() + s.r() + 1};
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<Vector> dirs;
  for (int k : idx) {
    if (k < 1 || k > n) continue;
    dirs.push_back(s.phi_system().vectors.col(k - 1));
    dirs.push_back(s.psi_system().vectors.col(k - 1));
  }
  return dirs;
}

struct Rayleigh {
  double a;  // u^T Phi u
  double b;  // u^T Psi u
};

Rayleigh rayleigh(const ComparisonSpec& s, const Vector& u) {
  return {u.dot(s.phi().dense() * u), u.dot(s.psi().dense() * u)};
}

// Up to `per_end` eigenpairs from each end of the spectrum with |mu| above
// `level`.
template <class F>
void for_violating_pairs(const PencilEig& pe, double level, int per_end, F&& emit) {
  const int n = static_cast<int>(pe.values.size());
  for (int k = 0; k < std::min(per_end, n); ++k) {
    const int i = n - 1 - k;
    if (pe.values(i) > level) emit(1, pe.vectors.col(i));
    else break;
  }
  for (int k = 0; k < std::min(per_end, n); ++k) {
    if (-pe.values(k) > level) emit(-1, pe.vectors.col(k));
    else break;
  }
}

double c1_sign(DeltaVariant v) { return is_plus(v) ? 1.0 : -1.0; }

double norm_ratio(const ComparisonSpec& s) {
  const double a = s.phi_norm(), b = s.psi_norm();
  if (!(a > 0.0) || !(b > 0.0)) return 1.0;
  return std::clamp(b / a, 1e-6, 1e6);
}

// Two-parameter least-squares fit of Psi on (Phi, I) in the Frobenius inner
// product.
std::optional<TransformParams> affine_fit(const ComparisonSpec& s) {
  const Matrix& phi = s.phi().dense();
  const Matrix& psi = s.psi().dense();
  const double n = s.n();
  const double pp = phi.squaredNorm(), tp = phi.trace();
  const double det = pp * n - tp * tp;
  if (!(det > 1e-14 * pp * n)) return std::nullopt;
  const double rp = phi.cwiseProduct(psi).sum(), tq = psi.trace();
  return TransformParams{(rp * n - tp * tq) / det, (pp * tq - tp * rp) / det};
}

std::optional<TransformParams> exact_match(const ComparisonSpec& s, DeltaVariant v) {
  const auto fit = affine_fit(s);
  if (!fit) return std::nullopt;
  if ((is_plus(v) && fit->c1 <= 0.0) || (!is_plus(v) && fit->c1 >= 0.0)) return std::nullopt;
  if (residual_norm(s, *fit) >= 1e-12 * std::max(1.0, s.psi_norm())) return std::nullopt;
  if (!feasibility(s, *fit, v).feasible) return std::nullopt;
  return fit;
}

struct Box {
  double c1;
  double c0;
};

Box c_space_box(const ComparisonSpec& s) {
  return {1e3 * norm_ratio(s), 1e3 * s.scale()};
}

// Point maximizing the smallest constraint residual (sign residual measured
// as c1 * (1 + ||Phi||) so all residuals share eigenvalue units). Returns
// nullopt when no point has all residuals positive.
std::optional<TransformParams> interior_point(const ComparisonSpec& s, DeltaVariant v,
                                              double* margin = nullptr) {
  const Box box = c_space_box(s);
  const double sg = c1_sign(v);
  const double cap = s.scale();
  Vector lower(3), upper(3);
  lower << (sg > 0 ? 0.0 : -box.c1), -box.c0, -10.0 * cap;
  upper << (sg > 0 ? box.c1 : 0.0), box.c0, cap;
  Vector obj(3);
  obj << 0.0, 0.0, 1.0;
  std::vector<AffineForm> forms;
  for (const auto& nf : constraint_forms(s, v)) {
    if (nf.name == "sign") forms.push_back({sg * (1.0 + s.phi_norm()), 0.0, 0.0});
    else forms.push_back(nf.form);
  }
  Matrix a(forms.size(), 3);
  Vector b(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    // s - g(c) <= 0  ->  -g1 c1 - g0 c0 + s <= g_const
    a(i, 0) = -forms[i].coef_c1;
    a(i, 1) = -forms[i].coef_c0;
    a(i, 2) = 1.0;
    b(i) = forms[i].constant;
  }
  const auto res = lp::maximize_boxed(a, b, obj, lower, upper);
  if (res.status != lp::LpStatus::Optimal) return std::nullopt;
  if (margin) *margin = res.x(2);
  if (!(res.x(2) > 1e-10 * s.scale())) return std::nullopt;
  TransformParams p{res.x(0), res.x(1)};
  if (!feasibility(s, p, v).feasible) return std::nullopt;
  return p;
}

struct CcPoint {
  double y1 = 0.0, y2 = 0.0, t = 0.0;
};

CcPoint normalized_cc(const ComparisonSpec& s, const TransformParams& p) {
  const double nrm = residual_norm(s, p);
  return {p.c1 / nrm, p.c0 / nrm, 1.0 / nrm};
}

// Moves a relaxed optimum toward a strictly feasible point along a segment
// in Charnes-Cooper coordinates (the relaxed feasible set is convex there),
// stopping at the first point that passes the strict check.
std::optional<TransformParams> pull_back(const ComparisonSpec& s, DeltaVariant v,
                                         const CcPoint& star, const TransformParams& interior) {
  const CcPoint in = normalized_cc(s, interior);
  for (int e = -12; e <= 0; ++e) {
    const double th = std::pow(10.0, e);
    const CcPoint q{(1 - th) * star.y1 + th * in.y1, (1 - th) * star.y2 + th * in.y2,
                    (1 - th) * star.t + th * in.t};
    if (!(q.t > 0.0)) continue;
    const TransformParams p{q.y1 / q.t, q.y2 / q.t};
    if ((is_plus(v) && p.c1 < 0.0) || (!is_plus(v) && p.c1 > 0.0)) continue;
    if (feasibility(s, p, v).feasible) return p;
  }
  return std::nullopt;
}

void finalize_feasible(const ComparisonSpec& s, SubproblemSolution& sol, const TransformParams& p) {
  const auto rep = feasibility(s, p, sol.variant);
  sol.params = p;
  sol.feasible = rep.feasible;
  sol.strictness_margin = rep.strictness_margin;
  sol.objective_unscaled = objective(s, p, sol.variant);
}

SubproblemSolution exact_solution(const ComparisonSpec& s, DeltaVariant v, SolverKind k,
                                  const TransformParams& p) {
  SubproblemSolution sol;
  sol.variant = v;
  sol.solver = k;
  sol.status = SolveStatus::ExactMatch;
  finalize_feasible(s, sol, p);
  sol.objective_unscaled = 0.0;
  return sol;
}

// Infimum is at least 1: nothing to gain over the trivial bound.
void mark_trivial(const ComparisonSpec& s, SubproblemSolution& sol) {
  sol.objective_unscaled = 1.0;
  sol.feasible = false;
  if (s.boundary_block()) {
    sol.status = SolveStatus::SupremumAtInfinity;
    sol.diagnostic = "infimum 1 approached as |c0| grows";
  } else {
    sol.status = SolveStatus::AboveTrivial;
    sol.diagnostic = "no admissible transform improves on the trivial bound";
  }
}

}  // namespace

CharnesCooperPoint to_charnes_cooper(const TransformParams& p, const ComparisonSpec& spec) {
  const double nrm = residual_norm(spec, p);
  if (!(nrm > 0.0)) {
    throw std::domain_error("transform reproduces Psi exactly; bound is 0 and the point is at infinity");
  }
  return {p.c1 / nrm, p.c0 / nrm, 1.0 / nrm};
}

TransformParams from_charnes_cooper(const CharnesCooperPoint& y) {
  if (!(y.t > 0.0)) throw std::domain_error("Charnes-Cooper point needs t > 0");
  return {y.y1 / y.t, y.y2 / y.t};
}

SubproblemSolution solve_charnes_cooper(const ComparisonSpec& spec, DeltaVariant variant,
                                        const SolveOptions& options) {
  SubproblemSolution sol;
  sol.variant = variant;
  sol.solver = SolverKind::CharnesCooper;

  if (auto em = exact_match(spec, variant)) {
    return exact_solution(spec, variant, SolverKind::CharnesCooper, *em);
  }
  const auto interior = interior_point(spec, variant);
  if (!interior) {
    sol.status = SolveStatus::Infeasible;
    sol.diagnostic = "no strictly feasible transform for this variant";
    return sol;
  }

  const auto terms = delta_terms(spec, variant);
  const auto overlaps = overlap_forms(spec, variant);
  const double sg = c1_sign(variant);
  double box = 1e3 / (1.0 + std::min(spec.phi_norm(), spec.psi_norm()));

  // x = (y1, y2, t, z), maximize z.
  Vector obj(4), lower(4), upper(4);
  obj << 0, 0, 0, 1;
  auto set_box = [&](double b) {
    lower << (sg > 0 ? 0.0 : -b), -b, 0.0, 0.0;
    upper << (sg > 0 ? b : 0.0), b, b, kInf;
  };
  set_box(box);
  KelleyMaster master(obj, lower, upper);
  for (const auto& f : terms) {
    Vector a(4);
    a << -f.coef_c1, -f.coef_c0, -f.constant, 1.0;
    master.add_row(a, 0.0);
  }
  for (const auto& g : overlaps) {
    Vector a(4);
    a << -g.coef_c1, -g.coef_c0, -g.constant, 0.0;
    master.add_row(a, 0.0);
  }
  auto add_cut = [&](int sign, const Vector& u) {
    const Rayleigh q = rayleigh(spec, u);
    Vector a(4);
    a << sign * q.a, sign * 1.0, -sign * q.b, 0.0;
    return master.add_row(a, 1.0);
  };
  for (const auto& u : seed_directions(spec)) {
    add_cut(1, u);
    add_cut(-1, u);
  }

  // Incumbent: best delta / ||M|| over points with t > 0, kept normalized.
  double inc = 0.0;
  CcPoint best;
  bool have = false;
  auto consider = [&](const TransformParams& p) {
    if ((is_plus(variant) && p.c1 < 0.0) || (!is_plus(variant) && p.c1 > 0.0)) return;
    const auto rep = feasibility(spec, p, variant);
    if (!(rep.delta > 0.0)) return;
    for (const auto& r : rep.residuals) {
      if (r.value < -1e-9 * spec.scale()) return;
    }
    const PencilEig pe = pencil_eig(spec, p.c1, p.c0, 1.0);
    const double val = rep.delta / pe.norm();
    for_violating_pairs(pe, 0.0, 1, [&](int sign, const Vector& u) { add_cut(sign, u); });
    if (val > inc) {
      inc = val;
      best = {p.c1 / pe.norm(), p.c0 / pe.norm(), 1.0 / pe.norm()};
      have = true;
    }
  };
  if (is_plus(variant)) consider({1.0, 0.0});
  consider(*interior);

  int growths = 0;
  double ub = kInf;
  bool converged = false;
  bool supremum = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const auto res = master.solve();
    if (res.status != lp::LpStatus::Optimal) {
      sol.diagnostic = "master LP failed";
      break;
    }
    ub = res.value;
    const Vector& x = res.x;
    const PencilEig pe = pencil_eig(spec, x(0), x(1), x(2));
    const double nrm = pe.norm();
    if (x(2) > 0.0 && nrm > 0.0) {
      const double d = min_term(terms, x(0), x(1), x(2));
      if (d > 0.0 && d / nrm > inc) {
        inc = d / nrm;
        best = {x(0) / nrm, x(1) / nrm, x(2) / nrm};
        have = true;
      }
    }
    if (options.record_trace) {
      sol.trace.push_back({it + 1, have ? 1.0 / inc : kInf, ub, master.rows(), 0.0});
    }
    if (ub <= 1.0 + 1e-9) {
      supremum = true;
      converged = true;
      break;
    }
    if (ub - inc <= options.gap_tol * (1.0 + inc)) {
      bool pinned = false;
      for (int i = 0; i < 3; ++i) pinned = pinned || master.on_box_face(x, i);
      if (pinned && growths < 3) {
        ++growths;
        box *= 10.0;
        set_box(box);
        for (int i = 0; i < 4; ++i) master.set_bounds(i, lower(i), upper(i));
        continue;
      }
      converged = true;
      break;
    }
    int added = 0;
    for_violating_pairs(pe, 1.0 + 1e-13, 3, [&](int sign, const Vector& u) {
      added += add_cut(sign, u) ? 1 : 0;
    });
    if (added == 0) {
      // Nothing left to separate: the master point is feasible up to
      // roundoff and its value is the optimum.
      converged = true;
      break;
    }
  }
  sol.iterations = it + (converged ? 1 : 0);
  sol.gap = have ? ub - inc : ub;

  if (supremum) {
    if (have) sol.params = {best.y1 / best.t, best.y2 / best.t};
    mark_trivial(spec, sol);
    return sol;
  }
  if (!have) {
    sol.status = SolveStatus::Infeasible;
    sol.diagnostic = "no incumbent with t > 0";
    return sol;
  }
  sol.status = converged ? SolveStatus::Optimal : SolveStatus::Stalled;
  TransformParams p{best.y1 / best.t, best.y2 / best.t};
  if (!feasibility(spec, p, variant).feasible) {
    if (auto q = pull_back(spec, variant, best, *interior)) {
      p = *q;
    } else {
      p = *interior;
    }
  }
  finalize_feasible(spec, sol, p);
  if (!sol.feasible) {
    sol.status = SolveStatus::Infeasible;
    sol.diagnostic = "relaxed optimum could not be made strictly feasible";
  }
  return sol;
}

SubproblemSolution solve_dinkelbach(const ComparisonSpec& spec, DeltaVariant variant,
                                    std::optional<TransformParams> init,
                                    const DinkelbachOptions& options) {
  SubproblemSolution sol;
  sol.variant = variant;
  sol.solver = SolverKind::Dinkelbach;

  if (auto em = exact_match(spec, variant)) {
    auto out = exact_solution(spec, variant, SolverKind::Dinkelbach, *em);
    out.lambda_trace = {kInf};
    return out;
  }
  const auto interior = interior_point(spec, variant);
  if (!interior) {
    sol.status = SolveStatus::Infeasible;
    sol.diagnostic = "no strictly feasible transform for this variant";
    return sol;
  }

  const auto terms = delta_terms(spec, variant);
  const auto overlaps = overlap_forms(spec, variant);
  const double sg = c1_sign(variant);
  Box box = c_space_box(spec);

  // x = (c1, c0, z, w): z <= each separation term, w >= ||M(c)|| via cuts.
  Vector obj(4), lower(4), upper(4);
  auto set_box = [&]() {
    lower << (sg > 0 ? 0.0 : -box.c1), -box.c0, 0.0, 0.0;
    // z and w get finite caps too (both are bounded by |c1| ||Phi|| + |c0| +
    // ||Psi|| on the box). An unbounded column invites a spurious ray when
    // its reduced cost is zero up to rounding, as w's is at lambda = 0.
    const double cap = 2.0 * (box.c1 * spec.phi_norm() + box.c0 + spec.psi_norm()) + 1.0;
    upper << (sg > 0 ? box.c1 : 0.0), box.c0, cap, cap;
  };
  set_box();
  obj << 0, 0, 1, 0;
  std::vector<std::pair<Vector, double>> rows;
  for (const auto& f : terms) {
    Vector a(4);
    a << -f.coef_c1, -f.coef_c0, 1.0, 0.0;
    rows.emplace_back(a, f.constant);
  }
  for (const auto& g : overlaps) {
    Vector a(4);
    a << -g.coef_c1, -g.coef_c0, 0.0, 0.0;
    rows.emplace_back(a, g.constant);
  }
  std::vector<std::pair<Vector, double>> cuts;
  auto add_cut = [&](int sign, const Vector& u) {
    const Rayleigh q = rayleigh(spec, u);
    Vector a(4);
    a << sign * q.a, sign * 1.0, 0.0, -1.0;
    cuts.emplace_back(a, sign * q.b);
  };
  for (const auto& u : seed_directions(spec)) {
    add_cut(1, u);
    add_cut(-1, u);
  }
  auto seed_point = [&](const TransformParams& p) {
    const PencilEig pe = pencil_eig(spec, p.c1, p.c0, 1.0);
    for_violating_pairs(pe, 0.0, 1, [&](int sign, const Vector& u) { add_cut(sign, u); });
  };
  if (init) seed_point(*init);
  seed_point(*interior);

  auto build_master = [&](double lambda) {
    Vector o = obj;
    o(3) = -lambda;
    KelleyMaster m(o, lower, upper);
    for (const auto& [a, b] : rows) m.add_row(a, b);
    for (const auto& [a, b] : cuts) m.add_row(a, b);
    return m;
  };

  double lambda = spec.boundary_block() ? 1.0 : 0.0;
  TransformParams best = *interior;
  double best_norm = 1.0;
  bool have = false;
  bool converged = false;
  int outer = 0;
  for (; outer < options.max_outer; ++outer) {
    // Each parametric problem starts from the base box; growth below only
    // lasts for this lambda so one unbounded early step does not cost
    // precision for the rest of the run.
    box = c_space_box(spec);
    set_box();
    KelleyMaster master = build_master(lambda);
    double inner_inc = -kInf, inner_ub = kInf;
    TransformParams x_best = best;
    double x_delta = 0.0, x_norm = 0.0;
    int growths = 0;
    const double unit = have ? best_norm : 1.0;
    const double inner_tol = 1e-3 * options.outer_tol * (1.0 + lambda) * unit;
    for (int k = 0; k < options.max_inner; ++k) {
      const auto res = master.solve();
      if (res.status != lp::LpStatus::Optimal) {
        sol.diagnostic = "inner master LP failed (status " + std::to_string(static_cast<int>(res.status)) + ")";
        break;
      }
      inner_ub = res.value;
      const TransformParams p{res.x(0), res.x(1)};
      const PencilEig pe = pencil_eig(spec, p.c1, p.c0, 1.0);
      const double d = min_term(terms, p.c1, p.c0, 1.0);
      const double val = d - lambda * pe.norm();
      if (val > inner_inc) {
        inner_inc = val;
        x_best = p;
        x_delta = d;
        x_norm = pe.norm();
      }
      if (inner_ub - inner_inc <= inner_tol) {
        const bool pinned = master.on_box_face(res.x, 0) || master.on_box_face(res.x, 1);
        if (pinned && growths < 3) {
          ++growths;
          box.c1 *= 10.0;
          box.c0 *= 10.0;
          set_box();
          for (int i = 0; i < 4; ++i) master.set_bounds(i, lower(i), upper(i));
          continue;
        }
        break;
      }
      int added = 0;
      for_violating_pairs(pe, res.x(3) * (1.0 + 1e-13), 2, [&](int sign, const Vector& u) {
        add_cut(sign, u);
        added += master.add_row(cuts.back().first, cuts.back().second) ? 1 : 0;
      });
      if (added == 0) break;
    }
    sol.lambda_trace.push_back(lambda);
    sol.parametric_trace.push_back(inner_inc);
    if (options.record_trace) {
      sol.trace.push_back({outer + 1, lambda > 0 ? 1.0 / lambda : kInf, inner_ub,
                           static_cast<int>(cuts.size()), lambda});
    }
    // F(lambda) / ||M|| bounds how far lambda is below the optimum.
    if (inner_ub <= options.outer_tol * (1.0 + lambda) * unit) {
      converged = true;
      break;
    }
    if (!(x_norm > 0.0) || !(x_delta > 0.0)) break;
    const double next = x_delta / x_norm;
    if (!(next > lambda)) {
      converged = inner_inc <= options.outer_tol * (1.0 + lambda) * unit;
      break;
    }
    lambda = next;
    best = x_best;
    best_norm = x_norm;
    have = true;
  }
  sol.iterations = outer + 1;
  sol.gap = sol.parametric_trace.empty() ? kInf : sol.parametric_trace.back();

  if (!have) {
    if (spec.boundary_block()) {
      mark_trivial(spec, sol);
      return sol;
    }
    sol.status = SolveStatus::Infeasible;
    if (sol.diagnostic.empty()) sol.diagnostic = "parametric iteration found no point with positive separation";
    return sol;
  }
  if (lambda <= 1.0 + 1e-9) {
    sol.params = best;
    mark_trivial(spec, sol);
    return sol;
  }
  sol.status = converged ? SolveStatus::Optimal : SolveStatus::Stalled;
  TransformParams p = best;
  if (!feasibility(spec, p, variant).feasible) {
    if (auto q = pull_back(spec, variant, normalized_cc(spec, p), *interior)) p = *q;
  }
  finalize_feasible(spec, sol, p);
  if (!sol.feasible) {
    sol.status = SolveStatus::Infeasible;
    sol.diagnostic = "relaxed optimum could not be made strictly feasible";
  }
  return sol;
}

namespace {

struct LineOpt {
  double value = kInf;
  double c0 = 0.0;
  bool at_infinity = false;
  double lo = -kInf, hi = kInf;
};

// Exact minimum over c0 of ||c1 Phi + c0 I - Psi|| / delta on the closure of
// the feasible interval. Between breakpoints the ratio is a quotient of two
// affine functions and therefore monotone, so only breakpoints, interval
// ends and the limits at +-inf need checking.
LineOpt best_c0(const ComparisonSpec& s, const std::vector<NamedForm>& forms,
                const std::vector<AffineForm>& terms, double c1) {
  LineOpt out;
  double lo = -kInf, hi = kInf;
  for (const auto& nf : forms) {
    const double alpha = nf.form.coef_c1 * c1 + nf.form.constant;
    const double beta = nf.form.coef_c0;
    if (beta > 0) lo = std::max(lo, -alpha / beta);
    else if (beta < 0) hi = std::min(hi, -alpha / beta);
    else if (alpha < 0) return out;
  }
  if (lo > hi) return out;
  out.lo = lo;
  out.hi = hi;
  const Vector ev = pencil_eig(s, c1, 0.0, 1.0, false).values;
  const double lmin = ev(0), lmax = ev(ev.size() - 1);
  auto ratio = [&](double c0) {
    double d = kInf;
    for (const auto& f : terms) d = std::min(d, f.coef_c1 * c1 + f.coef_c0 * c0 + f.constant);
    if (!(d > 0.0)) return kInf;
    return std::max(lmax + c0, -lmin - c0) / d;
  };
  std::vector<double> cand;
  if (std::isfinite(lo)) cand.push_back(lo);
  if (std::isfinite(hi)) cand.push_back(hi);
  cand.push_back(-(lmax + lmin) / 2.0);
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      const double da = terms[a].coef_c0 - terms[b].coef_c0;
      if (da == 0.0) continue;
      const double num = (terms[b].coef_c1 - terms[a].coef_c1) * c1 + terms[b].constant - terms[a].constant;
      cand.push_back(num / da);
    }
  }
  for (double c0 : cand) {
    if (c0 < lo || c0 > hi) continue;
    const double v = ratio(c0);
    if (v < out.value) {
      out.value = v;
      out.c0 = c0;
    }
  }
  // Limits at an unbounded end where every separation term grows.
  auto all_terms_grow = [&](double dir) {
    for (const auto& f : terms) {
      if (f.coef_c0 * dir <= 0) return false;
    }
    return true;
  };
  if ((hi == kInf && all_terms_grow(1.0)) || (lo == -kInf && all_terms_grow(-1.0))) {
    if (1.0 < out.value) {
      out.value = 1.0;
      out.at_infinity = true;
      out.c0 = hi == kInf && all_terms_grow(1.0) ? kInf : -kInf;
    }
  }
  return out;
}

}  // namespace

SubproblemSolution solve_oracle(const ComparisonSpec& spec, DeltaVariant variant,
                                const OracleGrid& grid) {
  SubproblemSolution sol;
  sol.variant = variant;
  sol.solver = SolverKind::Oracle;
  const auto forms = constraint_forms(spec, variant);
  const auto terms = delta_terms(spec, variant);
  const double sg = c1_sign(variant);
  const double center = grid.center_on_norm_ratio ? norm_ratio(spec) : 1.0;
  const double l0 = std::log(grid.c1_min * center), l1 = std::log(grid.c1_max * center);
  const int m = std::max(grid.c1_points, 2);

  auto eval = [&](double logc) { return best_c0(spec, forms, terms, sg * std::exp(logc)); };

  std::vector<LineOpt> rows(m);
  int arg = -1;
  for (int i = 0; i < m; ++i) {
    rows[i] = eval(l0 + (l1 - l0) * i / (m - 1));
    if (rows[i].value < kInf && (arg < 0 || rows[i].value < rows[arg].value)) arg = i;
  }
  sol.iterations = m;
  if (arg < 0) {
    sol.status = SolveStatus::Infeasible;
    sol.diagnostic = "no feasible grid cell";
    return sol;
  }
  double best_log = l0 + (l1 - l0) * arg / (m - 1);
  LineOpt best = rows[arg];
  // Golden-section on the quasiconvex profile g(c1) = min_c0 ratio.
  double a = l0 + (l1 - l0) * std::max(arg - 1, 0) / (m - 1);
  double b = l0 + (l1 - l0) * std::min(arg + 1, m - 1) / (m - 1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  LineOpt f1 = eval(x1), f2 = eval(x2);
  for (int k = 0; k < grid.golden_iterations; ++k) {
    if (f1.value < best.value) { best = f1; best_log = x1; }
    if (f2.value < best.value) { best = f2; best_log = x2; }
    if (f1.value <= f2.value) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = eval(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = eval(x2);
    }
  }
  if (f1.value < best.value) { best = f1; best_log = x1; }
  if (f2.value < best.value) { best = f2; best_log = x2; }
  sol.iterations += grid.golden_iterations;

  const double c1 = sg * std::exp(best_log);
  if (best.at_infinity || best.value >= 1.0 - 1e-12) {
    sol.params = {c1, best.at_infinity ? std::copysign(1e6 * spec.scale(), best.c0) : best.c0};
    mark_trivial(spec, sol);
    return sol;
  }
  // Grid points carry rounding in c1, so an exact affine relation shows up
  // as a ratio at roundoff level rather than 0.
  sol.status = best.value <= 1e-12 ? SolveStatus::ExactMatch : SolveStatus::Optimal;
  TransformParams p{c1, best.c0};
  // Nudge into the interior of the c0 interval for the strict check.
  if (!feasibility(spec, p, variant).feasible) {
    double mid;
    if (std::isfinite(best.lo) && std::isfinite(best.hi)) mid = 0.5 * (best.lo + best.hi);
    else if (std::isfinite(best.lo)) mid = best.lo + spec.scale();
    else if (std::isfinite(best.hi)) mid = best.hi - spec.scale();
    else mid = best.c0;
    for (int e = -12; e <= 0; ++e) {
      const TransformParams q{c1, best.c0 + std::pow(10.0, e) * (mid - best.c0)};
      if (feasibility(spec, q, variant).feasible) {
        p = q;
        break;
      }
    }
  }
  const auto rep = feasibility(spec, p, variant);
  sol.params = p;
  sol.strictness_margin = rep.strictness_margin;
  sol.feasible = rep.feasible;
  sol.objective_unscaled = rep.feasible ? objective(spec, p, variant) : best.value;
  if (!rep.feasible) sol.diagnostic = "optimum lies on the boundary of the feasible set";
  if (sol.status == SolveStatus::ExactMatch && rep.feasible) sol.objective_unscaled = 0.0;
  return sol;
}

BoundReport assemble_bound(const ComparisonSpec& spec, const BoundOptions& options) {
  BoundReport rep;
  rep.n = spec.n();
  rep.j = spec.j();
  rep.r = spec.r();
  rep.scaling_constant = scaling_constant(spec.n(), spec.r());

  const auto w = block(spec.phi_system(), spec.j(), spec.r());
  const auto v = block(spec.psi_system(), spec.j(), spec.r());
  rep.rho1_rescaled = rho1(w, v) / rep.scaling_constant;
  rep.rho2 = rho2(w, v);

  const StandardDk sdk = standard_dk(spec);
  rep.standard_dk_feasible = sdk.feasible;
  rep.standard_dk_rescaled = sdk.value;

  for (std::size_t i = 0; i < kAllVariants.size(); ++i) {
    rep.all_solutions[i].variant = kAllVariants[i];
  }
  if (!spec.eigengap_ok()) {
    rep.diagnostics = spec.warnings();
    rep.diagnostics.push_back("degenerate eigengap: falling back to the trivial bound");
    rep.extended_bound_rescaled = 1.0;
    rep.extended_bound_raw = rep.scaling_constant;
    rep.best.status = SolveStatus::Infeasible;
    return rep;
  }

  SolveOptions cp = options.cutting_plane;
  cp.record_trace = cp.record_trace || options.trace;
  int best_idx = -1;
  for (std::size_t i = 0; i < kAllVariants.size(); ++i) {
    rep.all_solutions[i] = solve_charnes_cooper(spec, kAllVariants[i], cp);
    const auto& s = rep.all_solutions[i];
    if (!s.diagnostic.empty()) {
      rep.diagnostics.push_back(std::string(variant_name(s.variant)) + ": " + s.diagnostic);
    }
    if (s.feasible && (best_idx < 0 || s.objective_unscaled < rep.all_solutions[best_idx].objective_unscaled)) {
      best_idx = static_cast<int>(i);
    }
  }
  if (best_idx >= 0) {
    rep.best = rep.all_solutions[best_idx];
    rep.extended_bound_rescaled = std::min(rep.best.objective_unscaled, 1.0);
    rep.trivial_fallback = !(rep.best.objective_unscaled < 1.0);
    rep.best_params_original = spec.to_original(rep.best.params);
  } else {
    // Nothing beats the trivial bound: keep the first capped record.
    for (const auto& s : rep.all_solutions) {
      if (s.status == SolveStatus::SupremumAtInfinity || s.status == SolveStatus::AboveTrivial) {
        rep.best = s;
        break;
      }
    }
    rep.extended_bound_rescaled = 1.0;
    rep.trivial_fallback = true;
  }
  rep.extended_bound_raw = rep.extended_bound_rescaled * rep.scaling_constant;

  if (options.check_dinkelbach) {
    for (const auto& s : rep.all_solutions) {
      DinkelbachOptions d;
      d.record_trace = options.trace;
      std::optional<TransformParams> init;
      if (s.feasible) init = s.params;
      rep.dinkelbach.push_back(solve_dinkelbach(spec, s.variant, init, d));
      if (best_idx >= 0 && s.variant == rep.best.variant) {
        rep.lambda_trace = rep.dinkelbach.back().lambda_trace;
      }
    }
  }
  if (options.check_oracle) {
    for (DeltaVariant v : kAllVariants) rep.oracle.push_back(solve_oracle(spec, v));
  }
  return rep;
}

std::string format_report(const BoundReport& r) {
  std::ostringstream os;
  os.precision(10);
  auto num = [](double x) {
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::string(buf);
  };
  os << "n: " << r.n << "\n";
  os << "j: " << r.j << "\n";
  os << "r: " << r.r << "\n";
  os << "scaling_constant: " << num(r.scaling_constant) << "\n";
  os << "extended_bound_rescaled: " << num(r.extended_bound_rescaled) << "\n";
  os << "extended_bound_raw: " << num(r.extended_bound_raw) << "\n";
  os << "standard_dk_rescaled: " << (r.standard_dk_feasible ? num(r.standard_dk_rescaled) : "infeasible") << "\n";
  os << "trivial: " << num(r.trivial) << "\n";
  os << "trivial_fallback: " << (r.trivial_fallback ? "yes" : "no") << "\n";
  os << "rho1_rescaled: " << num(r.rho1_rescaled) << "\n";
  os << "rho2: " << num(r.rho2) << "\n";
  os << "best_variant: " << variant_name(r.best.variant) << "\n";
  os << "best_c1: " << num(r.best_params_original.c1) << "\n";
  os << "best_c0: " << num(r.best_params_original.c0) << "\n";
  auto dump = [&](const char* label, const SubproblemSolution& s) {
    os << label << " " << variant_name(s.variant) << ": status=" << status_name(s.status)
       << " objective=" << num(s.objective_unscaled) << " c1=" << num(s.params.c1)
       << " c0=" << num(s.params.c0) << " iterations=" << s.iterations
       << " margin=" << num(s.strictness_margin) << "\n";
  };
  for (const auto& s : r.all_solutions) dump("subproblem", s);
  for (const auto& s : r.dinkelbach) dump("dinkelbach", s);
  for (const auto& s : r.oracle) dump("oracle", s);
  for (const auto& d : r.diagnostics) os << "diagnostic: " << d << "\n";
  return os.str();
}

}  // namespace dkbound
