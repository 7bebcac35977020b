// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "dkbound/bench/runner.hpp"
#include "dkbound/bench/scenario.hpp"
#include "dkbound/fracprog.hpp"
#include "dkbound/models.hpp"
#include "dkbound/rng.hpp"
#include "dkbound/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace dkbound;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.detail += "; over the time limit";
  }
  char time_buf[64];
  if (limit_s > 0) std::snprintf(time_buf, sizeof time_buf, "%.1fs, limit %.0fs", secs, limit_s);
  else std::snprintf(time_buf, sizeof time_buf, "%.1fs", secs);
  std::printf("%s %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), time_buf);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

int uniform_int(Stream& s, int lo, int hi) {
  return lo + static_cast<int>(s.uniform() * (hi - lo + 1));
}

// Random comparison drawn from the three model families. Blocks are either
// uniform over all valid (j, r) or the model's informative block (the K
// extreme eigenvectors, with reversal where they sit at the top).
enum class Blocks { Mixed, Boundary, Informative };

ComparisonSpec random_instance(Stream& s, Blocks blocks = Blocks::Mixed) {
  const int kind = uniform_int(s, 0, 2);
  const int K = 3;
  SymmetricMatrix phi, psi;
  bool rev_phi = false, rev_psi = false;
  int n = 0;
  if (kind < 2) {
    n = uniform_int(s, 20, 60);
    const double pw = 0.5 + 0.4 * s.uniform(), pb = 0.05 + 0.1 * s.uniform();
    const auto params = SbmParams::equal(n, K, pw, pb);
    const auto g = sample_sbm_resampling(params, s.next_u64()).ops;
    const int which = uniform_int(s, 0, 2);
    if (kind == 0) {
      // Shift operators against each other.
      if (which == 0) { phi = g.A; psi = g.L; rev_phi = true; }
      else if (which == 1) { phi = g.L; psi = g.L_sym; }
      else { phi = g.A; psi = g.L_sym; rev_phi = true; }
    } else {
      const auto b = generating_matrices(params);
      if (which == 0) { phi = g.A; psi = b.B_A; rev_phi = rev_psi = true; }
      else if (which == 1) { phi = g.L; psi = b.B_L; }
      else { phi = g.L_sym; psi = b.B_Lsym; }
    }
  } else {
    n = uniform_int(s, 20, 60);
    const int N = uniform_int(s, 20, 1000);
    const double pw = 0.5 + 0.4 * s.uniform(), pb = 0.4 * s.uniform() * pw;
    const auto sigma = spiked_covariance(SpikedCovParams::equal(n, K, pw, pb, N));
    phi = sample_covariance(sigma, N, s.next_u64());
    psi = sigma;
    rev_phi = rev_psi = true;
  }
  int j, r;
  if (blocks == Blocks::Boundary) {
    r = uniform_int(s, 1, 4);
    j = s.bernoulli(0.5) ? 0 : n - r;
  } else if (blocks == Blocks::Mixed && s.bernoulli(0.5)) {
    r = uniform_int(s, 1, n - 1);
    j = uniform_int(s, 0, n - r);
  } else {
    r = s.bernoulli(0.5) ? K : K - 1;
    j = s.bernoulli(0.5) ? 0 : 1;
  }
  return ComparisonSpec(phi, psi, j, r, rev_phi, rev_psi);
}

std::vector<ComparisonSpec> corpus(std::uint64_t seed, int count, Blocks blocks = Blocks::Mixed) {
  Stream s(seed);
  std::vector<ComparisonSpec> out;
  for (int i = 0; i < count; ++i) {
    Stream child = s.split(static_cast<std::uint64_t>(i));
    out.push_back(random_instance(child, blocks));
  }
  return out;
}

bool improves(const SubproblemSolution& s) { return s.feasible && s.objective_unscaled < 1.0; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Desk-scale scenario runs shared by criteria 7-9 and 11.
std::map<std::string, std::vector<bench::ResultRow>> scenario_rows;

const std::vector<bench::ResultRow>& rows_of(const std::string& id) {
  auto it = scenario_rows.find(id);
  if (it == scenario_rows.end()) {
    it = scenario_rows.emplace(id, bench::run_rows(bench::preset(id), {4})).first;
  }
  return it->second;
}

// Median extended bound per (comparison, sweep value).
std::map<std::string, std::map<int, double>> medians_by_comparison(const std::string& id) {
  const auto s = bench::preset(id);
  std::map<std::string, std::map<int, double>> out;
  for (const auto& row : bench::summarize(s, rows_of(id))) out[row.comparison][row.sweep_value] = row.median_extended;
  return out;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  std::vector<ComparisonSpec> chain_corpus;
  std::vector<BoundReport> chain_reports;

  report(1, "chain rho1/c <= rho2 + 1e-9 <= extended + 1e-9, 200 instances", 300, [&] {
    chain_corpus = corpus(101, 200);
    int bad = 0, improved = 0;
    double worst = -1e300;
    for (const auto& spec : chain_corpus) {
      chain_reports.push_back(assemble_bound(spec));
      const auto& r = chain_reports.back();
      const double v = std::max(r.rho1_rescaled - r.rho2, r.rho2 - r.extended_bound_rescaled);
      worst = std::max(worst, v);
      if (!(r.rho1_rescaled <= r.rho2 + 1e-9 && r.rho2 + 1e-9 <= r.extended_bound_rescaled + 1e-9)) ++bad;
      if (!r.trivial_fallback) ++improved;
    }
    return Outcome{bad == 0, std::to_string(bad) + " violations, worst slack " + fmt("%.3g", worst) + ", " +
                                 std::to_string(improved) + " below the trivial bound"};
  });

  report(2, "extended <= standard DK + 1e-8 where standard applies", 0, [&] {
    int applicable = 0, bad = 0;
    double worst = -1e300;
    for (const auto& r : chain_reports) {
      if (!r.standard_dk_feasible) continue;
      ++applicable;
      worst = std::max(worst, r.extended_bound_rescaled - r.standard_dk_rescaled);
      if (r.extended_bound_rescaled > r.standard_dk_rescaled + 1e-8) ++bad;
    }
    return Outcome{bad == 0 && chain_reports.size() == 200 && applicable > 0,
                   std::to_string(applicable) + " applicable, " + std::to_string(bad) +
                       " violations, max(extended - standard) " + fmt("%.3g", worst)};
  });

  report(3, "Charnes-Cooper vs Dinkelbach rel. diff <= 1e-6, 50 instances", 0, [&] {
    const auto specs = corpus(202, 50, Blocks::Informative);
    int compared = 0, bad = 0;
    double worst = 0.0;
    for (const auto& spec : specs) {
      for (DeltaVariant v : kAllVariants) {
        const auto cc = solve_charnes_cooper(spec, v);
        const auto dk = solve_dinkelbach(spec, v, cc.feasible ? std::optional(cc.params) : std::nullopt);
        if (!improves(cc) && !improves(dk)) continue;
        ++compared;
        const double d = rel_diff(std::min(cc.objective_unscaled, 1.0), std::min(dk.objective_unscaled, 1.0));
        worst = std::max(worst, d);
        if (!(d <= 1e-6) || improves(cc) != improves(dk)) ++bad;
      }
    }
    return Outcome{bad == 0 && compared > 0, std::to_string(compared) + " feasible subproblems, " +
                                                 std::to_string(bad) + " disagreements, max rel diff " +
                                                 fmt("%.3g", worst)};
  });

  report(4, "cutting plane in [oracle - 1e-6, oracle*(1+1e-4)], 30 instances", 0, [&] {
    const auto specs = corpus(303, 30, Blocks::Informative);
    int compared = 0, bad = 0;
    double worst_below = 0.0, worst_above = 0.0;
    for (const auto& spec : specs) {
      for (DeltaVariant v : kAllVariants) {
        const auto cc = solve_charnes_cooper(spec, v);
        const auto orc = solve_oracle(spec, v);
        if (!improves(cc) && !improves(orc)) continue;
        ++compared;
        const double a = std::min(cc.objective_unscaled, 1.0), o = std::min(orc.objective_unscaled, 1.0);
        worst_below = std::max(worst_below, o - a);
        worst_above = std::max(worst_above, o > 0 ? a / o - 1.0 : a);
        if (!(a >= o - 1e-6 && a <= o * (1 + 1e-4))) ++bad;
      }
    }
    return Outcome{bad == 0 && compared > 0,
                   std::to_string(compared) + " subproblems, " + std::to_string(bad) + " outside, max(oracle - cp) " +
                       fmt("%.3g", worst_below) + ", max(cp/oracle - 1) " + fmt("%.3g", worst_above)};
  });

  report(5, "boundary blocks: extended <= 1 + 1e-6, 100 instances", 0, [&] {
    const auto specs = corpus(404, 100, Blocks::Boundary);
    int bad = 0, below = 0;
    double worst = 0.0;
    for (const auto& spec : specs) {
      const auto r = assemble_bound(spec);
      worst = std::max(worst, r.extended_bound_rescaled);
      if (r.extended_bound_rescaled > 1 + 1e-6) ++bad;
      if (r.extended_bound_rescaled < 1.0) ++below;
    }
    return Outcome{bad == 0, std::to_string(bad) + " above, max " + fmt("%.17g", worst) + ", " +
                                 std::to_string(below) + " strictly below 1"};
  });

  report(6, "j = 0 limit: objective at c1 = 1, |c0| = 1e6*scale within 1e-3 of 1", 0, [&] {
    Stream s(505);
    int checked = 0, bad = 0, instances = 0, degenerate = 0;
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      Stream child = s.split(static_cast<std::uint64_t>(i));
      const auto base = random_instance(child, Blocks::Boundary);
      const ComparisonSpec spec(base.phi(), base.psi(), 0, base.r());
      int feasible_here = 0;
      for (DeltaVariant v : kAllVariants) {
        for (double sign : {-1.0, 1.0}) {
          const TransformParams p{1.0, sign * 1e6 * spec.scale()};
          if (!feasibility(spec, p, v).feasible) continue;
          ++feasible_here;
          const double d = std::abs(objective(spec, p, v) - 1.0);
          worst = std::max(worst, d);
          if (d > 1e-3) ++bad;
        }
      }
      checked += feasible_here;
      if (feasible_here > 0) ++instances;
      else if (spec.eigengap_ok()) ++bad;
      else ++degenerate;
    }
    return Outcome{bad == 0, std::to_string(instances) + " instances, " + std::to_string(checked) +
                                 " feasible (variant, sign) points, max |objective - 1| " + fmt("%.3g", worst) +
                                 ", " + std::to_string(degenerate) + " degenerate-gap instances skipped"};
  });

  report(7, "PCA sample sweep: median bound strictly decreasing in N, (c1, c0) -> identity", 600, [&] {
    const auto s = bench::preset("pca-sample-sweep");
    const auto sum = bench::summarize(s, rows_of(s.id));
    std::ostringstream os;
    bool dec = true;
    for (size_t k = 0; k < sum.size(); ++k) {
      os << "N=" << sum[k].sweep_value << " median " << fmt("%.4g", sum[k].median_extended) << "; ";
      if (k > 0 && !(sum[k].median_extended < sum[k - 1].median_extended)) dec = false;
    }
    const auto& last = sum.back();
    const bool near = std::abs(last.median_c1 - 1.0) < 0.2 && std::abs(last.median_c0) < 0.2;
    os << "N=" << last.sweep_value << " median c1 " << fmt("%.4g", last.median_c1) << ", c0 "
       << fmt("%.4g", last.median_c0);
    return Outcome{dec && near && sum.size() == 3 && s.K == 3 && s.fixed == 60, os.str()};
  });

  report(8, "PCA N=100, p=60: extended < standard in >= 24/25, median ratio >= 1.5", 0, [&] {
    const auto s = bench::preset("pca-attained-vs-bound");
    const auto& rows = rows_of(s.id);
    int sharper = 0, ext_below_one = 0, std_above_one = 0, std_applicable = 0;
    std::vector<double> ratio;
    for (const auto& r : rows) {
      // A standard bound whose theorem does not apply is an infinite bound.
      const double std_val = r.standard_feasible ? r.standard_dk_rescaled : HUGE_VAL;
      std_applicable += r.standard_feasible;
      if (r.extended_bound_rescaled < std_val) ++sharper;
      if (r.extended_bound_rescaled < 1.0) ++ext_below_one;
      if (std_val > 1.0) ++std_above_one;
      ratio.push_back(std_val / r.extended_bound_rescaled);
    }
    const double med = bench::median(ratio);
    const int n = static_cast<int>(rows.size());
    std::ostringstream os;
    os << sharper << "/" << n << " sharper, median standard/extended " << fmt("%.3g", med) << ", extended < 1 in "
       << ext_below_one << "/" << n << ", standard > 1 in " << std_above_one << "/" << n << " (standard applies in "
       << std_applicable << ")";
    return Outcome{n == 25 && sharper >= 24 && med >= 1.5 && ext_below_one == n && std_above_one >= 1, os.str()};
  });

  report(9, "SBM node sweeps n in {30, 60, 120}: median bound decreasing for all six comparisons", 0, [&] {
    std::ostringstream os;
    bool ok = true;
    int series = 0;
    for (const char* id : {"gso-nodes-sweep", "gen-nodes-sweep"}) {
      for (const auto& [label, by_n] : medians_by_comparison(id)) {
        ++series;
        os << label << ":";
        double prev = HUGE_VAL;
        for (const auto& [n, med] : by_n) {
          os << " " << fmt("%.3g", med);
          if (!(med < prev)) ok = false;
          prev = med;
        }
        os << "; ";
      }
    }
    return Outcome{ok && series == 6, os.str()};
  });

  report(10, "no reversal, j=1, r=2: standard DK infeasible in a majority, extended finite", 0, [&] {
    int total = 0, std_infeasible = 0, finite = 0, below_one = 0;
    for (int n : {30, 60, 120}) {
      for (int rep = 0; rep < 10; ++rep) {
        const auto params = SbmParams::equal(n, 3, 0.6, 0.1);
        const auto g = sample_sbm_resampling(params, Stream::derive(1, "standard-inapplicable", n, rep).key()).ops;
        for (auto [phi, psi] : {std::pair{&g.A, &g.L}, std::pair{&g.L, &g.L_sym}}) {
          const auto r = assemble_bound(ComparisonSpec(*phi, *psi, 1, 2));
          ++total;
          std_infeasible += !r.standard_dk_feasible;
          finite += std::isfinite(r.extended_bound_rescaled) && r.extended_bound_rescaled <= 1.0;
          below_one += r.extended_bound_rescaled < 1.0;
        }
      }
    }
    std::ostringstream os;
    os << "standard infeasible in " << std_infeasible << "/" << total << ", extended finite in " << finite << "/"
       << total << " (below 1 in " << below_one << ")";
    return Outcome{2 * std_infeasible > total && finite == total, os.str()};
  });

  report(11, "determinism: repeated runs of every scenario give byte-identical CSVs", 0, [&] {
    const fs::path root = fs::temp_directory_path() / "dkbound_acceptance";
    fs::remove_all(root);
    int same = 0, total = 0;
    std::string diff;
    for (const auto& id : bench::scenario_ids()) {
      const auto s = bench::preset(id);
      // First run: single worker, written through the normal file path.
      const auto a = bench::run_to_directory(s, (root / "a").string(), {1});
      const auto b = bench::run_to_directory(s, (root / "b").string(), {4});
      ++total;
      const std::string ta = read_file(a.csv), tb = read_file(b.csv);
      if (ta == tb && !ta.empty()) ++same;
      else diff += " " + id;
      // Seed the shared cache with the rows of the first run.
      std::ostringstream again;
      bench::write_csv(again, s, rows_of(id));
      if (again.str() != ta) diff += " " + id + "(cache)";
    }
    fs::remove_all(root);
    return Outcome{same == total && diff.empty(),
                   std::to_string(same) + "/" + std::to_string(total) + " scenarios identical" +
                       (diff.empty() ? "" : "; differing:" + diff)};
  });

  report(12, "eigh residual and orthogonality <= 1e-10 on 100 matrices up to n = 300", 120, [&] {
    double worst_res = 0.0, worst_orth = 0.0;
    Stream s(1212);
    for (int k = 1; k <= 100; ++k) {
      const int n = 3 * k;
      Matrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = s.normal();
      const auto a = SymmetricMatrix::symmetrized(m);
      const auto es = eigh(a);
      const Matrix recon = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
      worst_res = std::max(worst_res, (a.dense() - recon).norm() / a.dense().norm());
      worst_orth = std::max(
          worst_orth, (es.vectors.transpose() * es.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
    }
    return Outcome{worst_res <= 1e-10 && worst_orth <= 1e-10,
                   "max relative residual " + fmt("%.3g", worst_res) + ", max orthogonality error " +
                       fmt("%.3g", worst_orth)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
