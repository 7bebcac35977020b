#include "doctest.h"

#include "dkbound/rng.hpp"
#include "dkbound/subspace.hpp"

#include <cmath>

using namespace dkbound;

namespace {

EigenvectorBlock make_block(const Matrix& basis) {
  return {static_cast<int>(basis.rows()), static_cast<int>(basis.cols()), 0, basis};
}

Matrix random_orthonormal(int n, int r, Stream& s) {
  Matrix g(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = s.normal();
  Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(n, r);
  return q;
}

Matrix rotation2(double a, bool reflect) {
  Matrix q(2, 2);
  q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  if (reflect) q.col(1) *= -1.0;
  return q;
}

// inf over O(2) of ||W - V Q||_F by dense angle scan plus local refinement.
double brute_rho1_r2(const Matrix& w, const Matrix& v) {
  double best = 1e300;
  for (bool reflect : {false, true}) {
    double best_a = 0.0, best_val = 1e300;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
      const double a = 2.0 * M_PI * k / steps;
      const double val = (w - v * rotation2(a, reflect)).norm();
      if (val < best_val) {
        best_val = val;
        best_a = a;
      }
    }
    double lo = best_a - 2.0 * M_PI / steps, hi = best_a + 2.0 * M_PI / steps;
    for (int it = 0; it < 100; ++it) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if ((w - v * rotation2(m1, reflect)).norm() < (w - v * rotation2(m2, reflect)).norm()) hi = m2;
      else lo = m1;
    }
    best = std::min(best, (w - v * rotation2(0.5 * (lo + hi), reflect)).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("block extraction") {
  const auto es = eigh(SymmetricMatrix::diagonal({1, 2, 3}));
  const auto b0 = block(es, 0, 1);
  CHECK(std::abs(b0.basis(0, 0)) == doctest::Approx(1.0));
  const auto b1 = block(es, 0, 1, true);
  CHECK(std::abs(b1.basis(2, 0)) == doctest::Approx(1.0));
  const auto b2 = block(es, 1, 2);
  CHECK(b2.basis.rows() == 3);
  CHECK(b2.basis.cols() == 2);
  CHECK(std::abs(b2.basis(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(b2.basis(2, 1)) == doctest::Approx(1.0));
  // Reversed j = 1, r = 2: second and third largest.
  const auto b3 = block(es, 1, 2, true);
  CHECK(std::abs(b3.basis(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(b3.basis(0, 1)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(block(es, 2, 2), std::out_of_range);
  CHECK_THROWS_AS(block(es, -1, 1), std::out_of_range);
  CHECK_THROWS_AS(block(es, 0, 0), std::out_of_range);
}

TEST_CASE("scaling constant and trivial bound") {
  CHECK(scaling_constant(4, 1) == doctest::Approx(1.41421356));
  CHECK(scaling_constant(6, 3) == doctest::Approx(std::sqrt(6.0)));
  CHECK(scaling_constant(2, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(scaling_constant(10, 8) == doctest::Approx(2.0));
  CHECK_THROWS_AS(scaling_constant(4, 4), std::out_of_range);
  CHECK(trivial_bound() == 1.0);
  CHECK(trivial_bound_raw(4, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(trivial_bound_raw(6, 3) == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("principal cosines, rho1, rho2 on lines in the plane") {
  Matrix e1(2, 1), e2(2, 1), d(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  d << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto w = make_block(e1), v_orth = make_block(e2), v45 = make_block(d);

  CHECK(principal_cosines(w, w)(0) == doctest::Approx(1.0));
  CHECK(principal_cosines(w, v_orth)(0) == doctest::Approx(0.0));
  CHECK(principal_cosines(w, v45)(0) == doctest::Approx(1 / std::sqrt(2.0)));

  CHECK(rho1(w, w) == doctest::Approx(0.0));
  CHECK(rho1(w, v_orth) == doctest::Approx(std::sqrt(2.0)));
  // Q in {-1, +1}: min(||e1 - d||, ||e1 + d||).
  const double brute = std::min((e1 - d).norm(), (e1 + d).norm());
  CHECK(rho1(w, v45) == doctest::Approx(brute).epsilon(1e-12));
  CHECK(rho1(w, v45) == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));

  CHECK(rho2(w, w) == doctest::Approx(0.0));
  CHECK(rho2(w, v_orth) == doctest::Approx(1.0));
  const Matrix proj = e1 * e1.transpose() * (Matrix::Identity(2, 2) - d * d.transpose());
  const double direct = Eigen::JacobiSVD<Matrix>(proj).singularValues()(0);
  CHECK(rho2(w, v45) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(rho2(w, v45) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rho1 matches brute-force Procrustes search for r = 2") {
  Stream s(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix w = random_orthonormal(6, 2, s);
    const Matrix v = random_orthonormal(6, 2, s);
    CHECK(rho1(make_block(w), make_block(v)) == doctest::Approx(brute_rho1_r2(w, v)).epsilon(1e-8));
  }
}

TEST_CASE("rho2 matches the projector product norm") {
  Stream s(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + trial, r = 1 + trial % 3;
    const Matrix w = random_orthonormal(n, r, s), v = random_orthonormal(n, r, s);
    const Matrix prod = w * w.transpose() * (Matrix::Identity(n, n) - v * v.transpose());
    const double direct = Eigen::JacobiSVD<Matrix>(prod).singularValues()(0);
    CHECK(rho2(make_block(w), make_block(v)) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("metric properties on random blocks") {
  Stream s(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(s.uniform() * 20);
    const int r = 1 + static_cast<int>(s.uniform() * (n - 1));
    const Matrix w = random_orthonormal(n, r, s), v = random_orthonormal(n, r, s);
    const auto bw = make_block(w), bv = make_block(v);
    const double c = scaling_constant(n, r);
    const double d1 = rho1(bw, bv), d2 = rho2(bw, bv);
    CHECK(d1 / c <= d2 + 1e-9);
    CHECK(d1 <= c + 1e-9);
    CHECK(d2 >= 0.0);
    CHECK(d2 <= 1.0);
    const Vector cos = principal_cosines(bw, bv);
    CHECK(cos.minCoeff() >= 0.0);
    CHECK(cos.maxCoeff() <= 1.0);
    // Symmetry and invariance under orthogonal changes of basis.
    CHECK(rho1(bv, bw) == doctest::Approx(d1).epsilon(1e-10));
    CHECK(rho2(bv, bw) == doctest::Approx(d2).epsilon(1e-10));
    const Matrix q = random_orthonormal(r, r, s);
    CHECK(rho1(make_block(w * q), bv) == doctest::Approx(d1).epsilon(1e-9));
    CHECK(rho2(bw, make_block(v * q)) == doctest::Approx(d2).epsilon(1e-9));
  }
}

TEST_CASE("nearly equal subspaces keep relative accuracy") {
  Matrix w(3, 1), v(3, 1);
  const double eps = 1e-9;
  w << 1, 0, 0;
  v << std::cos(eps), std::sin(eps), 0;
  CHECK(rho2(make_block(w), make_block(v)) == doctest::Approx(std::sin(eps)).epsilon(1e-6));
  CHECK(rho1(make_block(w), make_block(v)) == doctest::Approx(2 * std::sin(eps / 2)).epsilon(1e-6));
}

TEST_CASE("dimension mismatch is rejected") {
  const auto a = make_block(Matrix::Identity(3, 1));
  const auto b = make_block(Matrix::Identity(3, 2));
  CHECK_THROWS_AS(rho1(a, b), std::invalid_argument);
  CHECK_THROWS_AS(rho2(a, b), std::invalid_argument);
  CHECK_THROWS_AS(principal_cosines(a, b), std::invalid_argument);
}
