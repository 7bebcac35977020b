#include "dkbound/dkcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dkbound {

std::string_view variant_name(DeltaVariant v) {
  switch (v) {
    case DeltaVariant::D1Plus: return "D1Plus";
    case DeltaVariant::D1Minus: return "D1Minus";
    case DeltaVariant::D2Plus: return "D2Plus";
    case DeltaVariant::D2Minus: return "D2Minus";
  }
  return "?";
}

DeltaVariant parse_variant(std::string_view name) {
  for (DeltaVariant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  throw std::invalid_argument("unknown delta variant: " + std::string(name));
}

ComparisonSpec::ComparisonSpec(SymmetricMatrix phi, SymmetricMatrix psi, int j, int r,
                               bool reverse_phi, bool reverse_psi)
    : phi_(reverse_phi ? -phi : std::move(phi)),
      psi_(reverse_psi ? -psi : std::move(psi)),
      j_(j),
      r_(r),
      reverse_phi_(reverse_phi),
      reverse_psi_(reverse_psi) {
  const int n = phi_.order();
  if (psi_.order() != n) {
    std::ostringstream os;
    os << "Phi and Psi differ in order: " << n << " vs " << psi_.order();
    throw std::invalid_argument(os.str());
  }
  if (n < 2 || r < 1 || r > n - 1 || j < 0 || j > n - r) {
    std::ostringstream os;
    os << "invalid block: n = " << n << ", j = " << j << ", r = " << r
       << " (need 1 <= r <= n-1, 0 <= j <= n-r)";
    throw std::out_of_range(os.str());
  }
  phi_sys_ = eigh(phi_);
  psi_sys_ = eigh(psi_);
  phi_norm_ = spectral_norm(phi_sys_).value;
  psi_norm_ = spectral_norm(psi_sys_).value;

  const double tol = 1e-10 * (1.0 + psi_norm_);
  if (j >= 1 && !(psi_value(j + 1) - psi_value(j) > tol)) {
    std::ostringstream os;
    os << "degenerate eigengap: psi_" << j << " = " << psi_value(j) << ", psi_" << j + 1
       << " = " << psi_value(j + 1);
    warnings_.push_back(os.str());
  }
  if (j + r <= n - 1 && !(psi_value(j + r + 1) - psi_value(j + r) > tol)) {
    std::ostringstream os;
    os << "degenerate eigengap: psi_" << j + r << " = " << psi_value(j + r) << ", psi_"
       << j + r + 1 << " = " << psi_value(j + r + 1);
    warnings_.push_back(os.str());
  }
}

double extended_eigenvalue(const EigenSystem& sys, int index) {
  const int n = sys.order();
  if (index < 0 || index > n + 1) {
    std::ostringstream os;
    os << "eigenvalue index " << index << " outside [0, " << n + 1 << "]";
    throw std::out_of_range(os.str());
  }
  if (index == 0) return -kInf;
  if (index == n + 1) return kInf;
  return sys.values(index - 1);
}

double ComparisonSpec::phi_value(int index) const { return extended_eigenvalue(phi_sys_, index); }
double ComparisonSpec::psi_value(int index) const { return extended_eigenvalue(psi_sys_, index); }

TransformParams ComparisonSpec::to_original(const TransformParams& p) const {
  const double s_phi = reverse_phi_ ? -1.0 : 1.0;
  const double s_psi = reverse_psi_ ? -1.0 : 1.0;
  return {p.c1 * s_phi * s_psi, p.c0 * s_psi};
}

namespace {

bool finite_form(const AffineForm& f) {
  return std::isfinite(f.coef_c1) && std::isfinite(f.coef_c0) && std::isfinite(f.constant);
}

// f(phi_k) for the smallest / largest transformed eigenvalue in the block.
// Affine maps are monotone, so these sit at the block endpoints, swapped when
// c1 < 0.
AffineForm transformed_block_min(const ComparisonSpec& s, DeltaVariant v) {
  const int k = is_plus(v) ? s.j() + 1 : s.j() + s.r();
  return {s.phi_value(k), 1.0, 0.0};
}

AffineForm transformed_block_max(const ComparisonSpec& s, DeltaVariant v) {
  const int k = is_plus(v) ? s.j() + s.r() : s.j() + 1;
  return {s.phi_value(k), 1.0, 0.0};
}

AffineForm constant_form(double c) { return {0.0, 0.0, c}; }

}  // namespace

std::vector<AffineForm> delta_terms(const ComparisonSpec& s, DeltaVariant v) {
  const int j = s.j();
  const int r = s.r();
  std::array<AffineForm, 2> raw{};
  switch (v) {
    case DeltaVariant::D1Plus:
      raw = {AffineForm{-s.phi_value(j + r), -1.0, s.psi_value(j + r + 1)},
             AffineForm{s.phi_value(j + 1), 1.0, -s.psi_value(j)}};
      break;
    case DeltaVariant::D1Minus:
      raw = {AffineForm{-s.phi_value(j + 1), -1.0, s.psi_value(j + r + 1)},
             AffineForm{s.phi_value(j + r), 1.0, -s.psi_value(j)}};
      break;
    case DeltaVariant::D2Plus:
      raw = {AffineForm{s.phi_value(j + r + 1), 1.0, -s.psi_value(j + r)},
             AffineForm{-s.phi_value(j), -1.0, s.psi_value(j + 1)}};
      break;
    case DeltaVariant::D2Minus:
      raw = {AffineForm{s.phi_value(j), 1.0, -s.psi_value(j + r)},
             AffineForm{-s.phi_value(j + r + 1), -1.0, s.psi_value(j + 1)}};
      break;
  }
  std::vector<AffineForm> out;
  for (const auto& f : raw) {
    if (finite_form(f)) out.push_back(f);
  }
  return out;
}

std::vector<NamedForm> constraint_forms(const ComparisonSpec& s, DeltaVariant v) {
  std::vector<NamedForm> out;
  out.push_back({"sign", AffineForm{is_plus(v) ? 1.0 : -1.0, 0.0, 0.0}});
  const auto terms = delta_terms(s, v);
  for (const auto& t : terms) out.push_back({"delta", t});

  AffineForm left, right;
  if (interval_choice(v) == 1) {
    left = transformed_block_min(s, v) - constant_form(s.psi_value(s.j() + 1));
    right = constant_form(s.psi_value(s.j() + s.r())) - transformed_block_max(s, v);
  } else {
    left = constant_form(s.psi_value(s.j() + 1)) - transformed_block_min(s, v);
    right = transformed_block_max(s, v) - constant_form(s.psi_value(s.j() + s.r()));
  }
  for (const auto& t : terms) out.push_back({"overlap_left", t - left});
  for (const auto& t : terms) out.push_back({"overlap_right", t - right});
  return out;
}

double delta(const ComparisonSpec& s, const TransformParams& p, DeltaVariant v) {
  if ((is_plus(v) && p.c1 < 0.0) || (!is_plus(v) && p.c1 > 0.0)) {
    std::ostringstream os;
    os << "variant " << variant_name(v) << " requires c1 " << (is_plus(v) ? "> 0" : "< 0")
       << ", got c1 = " << p.c1;
    throw std::invalid_argument(os.str());
  }
  double d = kInf;
  for (const auto& t : delta_terms(s, v)) d = std::min(d, t(p));
  return d;
}

double strict_tolerance(double delta_value) { return 1e-9 * (1.0 + std::abs(delta_value)); }

FeasibilityReport feasibility(const ComparisonSpec& s, const TransformParams& p,
                              DeltaVariant v) {
  FeasibilityReport rep;
  const auto forms = constraint_forms(s, v);
  // Group by name keeping first-appearance order; each residual is the
  // minimum of its forms (a min over separation terms).
  std::vector<Residual> grouped;
  for (const auto& nf : forms) {
    const double val = nf.form(p);
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&](const Residual& r) { return r.name == nf.name; });
    if (it == grouped.end()) {
      grouped.push_back({nf.name, val});
    } else {
      it->value = std::min(it->value, val);
    }
  }
  if (!s.eigengap_ok()) {
    // The separation is meaningless without both Psi gaps, whatever the
    // variant's own terms say.
    double gap = kInf;
    if (s.j() >= 1) gap = std::min(gap, s.psi_value(s.j() + 1) - s.psi_value(s.j()));
    if (s.j() + s.r() <= s.n() - 1) gap = std::min(gap, s.psi_value(s.j() + s.r() + 1) - s.psi_value(s.j() + s.r()));
    grouped.push_back({"eigengap", gap});
  }
  rep.residuals = std::move(grouped);
  rep.delta = kInf;
  for (const auto& t : delta_terms(s, v)) rep.delta = std::min(rep.delta, t(p));
  rep.strictness_margin = kInf;
  for (const auto& r : rep.residuals) rep.strictness_margin = std::min(rep.strictness_margin, r.value);
  const double tol = strict_tolerance(rep.delta);
  rep.feasible = s.eigengap_ok() && std::isfinite(rep.delta) &&
                 std::all_of(rep.residuals.begin(), rep.residuals.end(),
                             [&](const Residual& r) { return r.value > tol; });
  return rep;
}

double objective(const ComparisonSpec& s, const TransformParams& p, DeltaVariant v) {
  const FeasibilityReport rep = feasibility(s, p, v);
  if (!rep.feasible) return kInf;
  const double num = spectral_norm(s.phi().affine_residual(p.c1, p.c0, s.psi())).value;
  return num / rep.delta;
}

StandardDk standard_dk(const ComparisonSpec& s) {
  StandardDk out;
  for (DeltaVariant v : {DeltaVariant::D1Plus, DeltaVariant::D2Plus}) {
    const double val = objective(s, TransformParams{1.0, 0.0}, v);
    if (std::isfinite(val) && val < out.value) {
      out.value = val;
      out.feasible = true;
      out.variant_used = v;
    }
  }
  return out;
}

}  // namespace dkbound
