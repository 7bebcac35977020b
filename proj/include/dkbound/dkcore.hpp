#pragma once

#include "dkbound/spectra.hpp"

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace dkbound {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Affine spectral map f(Phi) = c1 * Phi + c0 * I.
struct TransformParams {
  double c1 = 1.0;
  double c0 = 0.0;
};

/// The four eigenvalue-separation variants: two interval choices crossed with
/// the sign of c1.
enum class DeltaVariant { D1Plus, D1Minus, D2Plus, D2Minus };

inline constexpr std::array<DeltaVariant, 4> kAllVariants = {
    DeltaVariant::D1Plus, DeltaVariant::D1Minus, DeltaVariant::D2Plus,
    DeltaVariant::D2Minus};

constexpr bool is_plus(DeltaVariant v) {
  return v == DeltaVariant::D1Plus || v == DeltaVariant::D2Plus;
}
constexpr int interval_choice(DeltaVariant v) {
  return (v == DeltaVariant::D1Plus || v == DeltaVariant::D1Minus) ? 1 : 2;
}
std::string_view variant_name(DeltaVariant v);
DeltaVariant parse_variant(std::string_view name);

/// c1 * coef_c1 + c0 * coef_c0 + constant. Every quantity in the bound
/// problem (separation terms, constraint rows) has this shape, and is
/// homogeneous of degree one in (c1, c0, 1), which is what lets the
/// Charnes-Cooper substitution keep them linear.
struct AffineForm {
  double coef_c1 = 0.0;
  double coef_c0 = 0.0;
  double constant = 0.0;

  double operator()(const TransformParams& p) const {
    return coef_c1 * p.c1 + coef_c0 * p.c0 + constant;
  }
  /// Value at (y1, y2, t) = t * (c1, c0, 1).
  double homogeneous(double y1, double y2, double t) const {
    return coef_c1 * y1 + coef_c0 * y2 + constant * t;
  }
  AffineForm operator-(const AffineForm& o) const {
    return {coef_c1 - o.coef_c1, coef_c0 - o.coef_c0, constant - o.constant};
  }
};

struct NamedForm {
  std::string name;
  AffineForm form;
};

/// One bound problem: compare the eigenvectors j+1..j+r of Phi and Psi.
/// Reversal flags negate the corresponding matrix, so the block is taken in
/// descending eigenvalue order; all eigenvalues, norms and transform
/// parameters below refer to these effective (possibly negated) matrices.
class ComparisonSpec {
 public:
  ComparisonSpec(SymmetricMatrix phi, SymmetricMatrix psi, int j, int r,
                 bool reverse_phi = false, bool reverse_psi = false);

  const SymmetricMatrix& phi() const { return phi_; }
  const SymmetricMatrix& psi() const { return psi_; }
  const EigenSystem& phi_system() const { return phi_sys_; }
  const EigenSystem& psi_system() const { return psi_sys_; }

  int n() const { return phi_.order(); }
  int j() const { return j_; }
  int r() const { return r_; }
  bool reverse_phi() const { return reverse_phi_; }
  bool reverse_psi() const { return reverse_psi_; }

  /// 1-based eigenvalue with index 0 -> -inf and n+1 -> +inf.
  double phi_value(int index) const;
  double psi_value(int index) const;

  double phi_norm() const { return phi_norm_; }
  double psi_norm() const { return psi_norm_; }
  /// 1 + ||Phi||_2 + ||Psi||_2.
  double scale() const { return 1.0 + phi_norm_ + psi_norm_; }

  /// First or last r eigenvectors (j == 0 or j == n - r).
  bool boundary_block() const { return j_ == 0 || j_ + r_ == n(); }

  /// psi_j < psi_{j+1} and psi_{j+r} < psi_{j+r+1} where defined.
  bool eigengap_ok() const { return warnings_.empty(); }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Map parameters found for the effective matrices back to the matrices as
  /// supplied: Psi ~ c1' Phi + c0' I.
  TransformParams to_original(const TransformParams& p) const;

 private:
  SymmetricMatrix phi_;
  SymmetricMatrix psi_;
  EigenSystem phi_sys_;
  EigenSystem psi_sys_;
  int j_;
  int r_;
  bool reverse_phi_;
  bool reverse_psi_;
  double phi_norm_ = 0.0;
  double psi_norm_ = 0.0;
  std::vector<std::string> warnings_;
};

double extended_eigenvalue(const EigenSystem& sys, int index);

/// The finite affine terms whose minimum is the separation for `variant`.
/// Terms that reference an eigenvalue at index 0 or n+1 are +inf under the
/// variant's sign of c1 and are dropped. At least one term always remains.
std::vector<AffineForm> delta_terms(const ComparisonSpec& spec, DeltaVariant variant);

/// Every linear form that must be strictly positive for (c1, c0) to be
/// admissible under `variant`: the sign of c1, each separation term, and each
/// separation term minus the two interval-overlap quantities.
std::vector<NamedForm> constraint_forms(const ComparisonSpec& spec, DeltaVariant variant);

/// Separation value. Throws std::invalid_argument if c1 has the wrong strict
/// sign for the variant (c1 == 0 is evaluated as a limit).
double delta(const ComparisonSpec& spec, const TransformParams& p, DeltaVariant variant);

struct Residual {
  std::string name;
  double value = 0.0;
};

struct FeasibilityReport {
  double delta = 0.0;
  std::vector<Residual> residuals;
  bool feasible = false;
  double strictness_margin = 0.0;  // smallest residual
};

/// Tolerance applied to the strict inequalities: 1e-9 * (1 + |delta|).
double strict_tolerance(double delta_value);

FeasibilityReport feasibility(const ComparisonSpec& spec, const TransformParams& p,
                              DeltaVariant variant);

/// ||c1 Phi + c0 I - Psi||_2 / delta when feasible, +inf otherwise. Not
/// multiplied by the scaling constant.
double objective(const ComparisonSpec& spec, const TransformParams& p, DeltaVariant variant);

struct StandardDk {
  double value = kInf;
  bool feasible = false;
  DeltaVariant variant_used = DeltaVariant::D1Plus;
};

/// Objective at the identity transform, best of the two c1 > 0 variants.
StandardDk standard_dk(const ComparisonSpec& spec);

}  // namespace dkbound
