#include "dkbound/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dkbound {

namespace {

void require_conformable(const EigenvectorBlock& w, const EigenvectorBlock& v) {
  if (w.n != v.n || w.r != v.r || w.basis.rows() != v.basis.rows() ||
      w.basis.cols() != v.basis.cols()) {
    std::ostringstream os;
    os << "block dimension mismatch: " << w.basis.rows() << "x" << w.basis.cols()
       << " vs " << v.basis.rows() << "x" << v.basis.cols();
    throw std::invalid_argument(os.str());
  }
}

// Eigenvalues of a small symmetric Gram-type matrix. Goes through eigh so the
// whole library shares one eigensolver.
Vector small_eigvals(const Matrix& g) {
  return eigvalsh(SymmetricMatrix::symmetrized(g));
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

EigenvectorBlock block(const EigenSystem& es, int j, int r, bool reverse) {
  const int n = es.order();
  if (r < 1 || j < 0 || j + r > n) {
    std::ostringstream os;
    os << "block index out of range: j = " << j << ", r = " << r << ", n = " << n;
    throw std::out_of_range(os.str());
  }
  EigenvectorBlock b{n, r, j, Matrix(n, r)};
  for (int k = 0; k < r; ++k) {
    const int col = reverse ? n - 1 - (j + k) : j + k;
    b.basis.col(k) = es.vectors.col(col);
  }
  return b;
}

double scaling_constant(int n, int r) {
  if (r < 1 || r > n - 1) {
    std::ostringstream os;
    os << "scaling constant needs 1 <= r <= n - 1, got n = " << n << ", r = " << r;
    throw std::out_of_range(os.str());
  }
  return std::sqrt(2.0 * std::min(r, n - r));
}

Vector principal_cosines(const EigenvectorBlock& w, const EigenvectorBlock& v) {
  require_conformable(w, v);
  const int r = w.r;
  const Matrix c = w.basis.transpose() * v.basis;
  // Symmetric embedding [[0, C], [C^T, 0]] has eigenvalues +-sigma_i.
  Matrix emb = Matrix::Zero(2 * r, 2 * r);
  emb.topRightCorner(r, r) = c;
  emb.bottomLeftCorner(r, r) = c.transpose();
  const Vector ev = small_eigvals(emb);
  Vector out(r);
  for (int k = 0; k < r; ++k) out(k) = clamp01(ev(2 * r - 1 - k));
  return out;
}

Vector principal_sines(const EigenvectorBlock& w, const EigenvectorBlock& v) {
  require_conformable(w, v);
  const Matrix x = w.basis - v.basis * (v.basis.transpose() * w.basis);
  const Vector ev = small_eigvals(x.transpose() * x);
  Vector out(w.r);
  for (int k = 0; k < w.r; ++k) out(k) = clamp01(std::sqrt(std::max(ev(k), 0.0)));
  return out;
}

double rho1(const EigenvectorBlock& w, const EigenvectorBlock& v) {
  // 2 (r - sum cos) written per angle as 2 sin^2 / (1 + cos), which stays
  // accurate when the subspaces nearly coincide.
  const Vector cosines = principal_cosines(w, v);
  const Vector sines = principal_sines(w, v);
  double acc = 0.0;
  for (int k = 0; k < w.r; ++k) {
    acc += 2.0 * sines(k) * sines(k) / (1.0 + cosines(k));
  }
  if (acc < 0.0 && acc >= -1e-12) acc = 0.0;
  return std::sqrt(acc);
}

double rho2(const EigenvectorBlock& w, const EigenvectorBlock& v) {
  const Vector sines = principal_sines(w, v);
  const double direct = sines(w.r - 1);
  const Vector cosines = principal_cosines(w, v);
  const double cmin = cosines(w.r - 1);
  const double via_cosine_sq = std::max(0.0, 1.0 - cmin * cmin);
  if (std::abs(direct * direct - via_cosine_sq) > 1e-9) {
    std::ostringstream os;
    os << "rho2 routes disagree: projector norm^2 = " << direct * direct
       << ", 1 - cos_min^2 = " << via_cosine_sq;
    throw std::logic_error(os.str());
  }
  return direct;
}

double trivial_bound() { return 1.0; }

double trivial_bound_raw(int n, int r) { return scaling_constant(n, r); }

}  // namespace dkbound
