#include "doctest.h"

#include "dkbound/matrix_io.hpp"
#include "dkbound/rng.hpp"
#include "dkbound/spectra.hpp"

#include <cmath>
#include <sstream>

using namespace dkbound;

namespace {

SymmetricMatrix random_symmetric(int n, std::uint64_t seed) {
  Stream s(seed);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = s.normal();
  return SymmetricMatrix::symmetrized(m);
}

// Cyclic Jacobi, written out independently of the library's solver.
Vector jacobi_eigenvalues(Matrix a) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * a.squaredNorm()) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector d = a.diagonal();
  std::sort(d.data(), d.data() + n);
  return d;
}

}  // namespace

TEST_CASE("symmetric matrix construction") {
  Matrix m(2, 2);
  m << 1, 2, 2.5, 1;
  CHECK_THROWS_AS(SymmetricMatrix::from_dense(m), std::invalid_argument);
  const auto s = SymmetricMatrix::symmetrized(m);
  CHECK(s(0, 1) == 2.25);
  CHECK(s(1, 0) == 2.25);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(SymmetricMatrix::from_dense(bad), std::invalid_argument);
  // Asymmetry at the rounding level is accepted and mirrored exactly.
  Matrix tiny = Matrix::Identity(2, 2);
  tiny(0, 1) = 1.0;
  tiny(1, 0) = 1.0 + 1e-15;
  const auto t = SymmetricMatrix::from_dense(tiny);
  CHECK(t(0, 1) == t(1, 0));
}

TEST_CASE("eigh on diagonal and identity input") {
  const auto es = eigh(SymmetricMatrix::diagonal({3, 1, 2}));
  CHECK(es.values(0) == doctest::Approx(1.0));
  CHECK(es.values(1) == doctest::Approx(2.0));
  CHECK(es.values(2) == doctest::Approx(3.0));
  Matrix p = Matrix::Zero(3, 3);
  p(1, 0) = 1;
  p(2, 1) = 1;
  p(0, 2) = 1;
  CHECK((es.vectors - p).cwiseAbs().maxCoeff() < 1e-15);

  const auto id = eigh(SymmetricMatrix::identity(4));
  for (int i = 0; i < 4; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
}

TEST_CASE("eigh invariants on random input") {
  for (int n : {1, 2, 7, 50, 120}) {
    const auto m = random_symmetric(n, 11 + n);
    const auto es = eigh(m);
    const double norm_f = m.dense().norm();
    const Matrix recon = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
    CHECK((m.dense() - recon).norm() <= 1e-10 * norm_f);
    CHECK((es.vectors.transpose() * es.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    const double norm2 = spectral_norm(es).value;
    for (int i = 0; i < n; ++i) {
      CHECK((m.dense() * es.vectors.col(i) - es.values(i) * es.vectors.col(i)).norm() <= 1e-10 * norm2);
      if (i > 0) CHECK(es.values(i - 1) <= es.values(i));
      // Sign convention: largest-magnitude entry nonnegative, first index on ties.
      Eigen::Index k;
      es.vectors.col(i).cwiseAbs().maxCoeff(&k);
      CHECK(es.vectors(k, i) >= 0.0);
    }
    CHECK(std::abs(es.values.sum() - m.dense().trace()) <= 1e-9 * n * norm2);
    CHECK(norm2 <= frobenius_norm(m.dense()) + 1e-12);
    CHECK(frobenius_norm(m.dense()) <= std::sqrt(static_cast<double>(n)) * norm2 + 1e-12);
  }
}

TEST_CASE("eigh eigenvalues agree with an independent Jacobi sweep") {
  const auto m = random_symmetric(50, 99);
  const Vector ours = eigvalsh(m);
  const Vector ref = jacobi_eigenvalues(m.dense());
  CHECK((ours - ref).cwiseAbs().maxCoeff() <= 1e-10 * spectral_norm(m).value);
}

TEST_CASE("eigh reproduces a prescribed spectrum") {
  const int n = 30;
  Stream s(5);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = s.normal();
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = -3.0 + 0.25 * i;
  const auto m = SymmetricMatrix::symmetrized(q * lambda.asDiagonal() * q.transpose());
  CHECK((eigvalsh(m) - lambda).cwiseAbs().maxCoeff() <= 1e-10 * 4.25);
}

TEST_CASE("eigh is deterministic") {
  const auto m = random_symmetric(40, 3);
  const auto a = eigh(m);
  const auto b = eigh(m);
  CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral norm") {
  const auto a = spectral_norm(SymmetricMatrix::diagonal({-3, 2}));
  CHECK(a.value == doctest::Approx(3.0));
  CHECK(a.sign == -1);
  CHECK(std::abs(std::abs(a.vector(0)) - 1.0) < 1e-15);
  CHECK(spectral_norm(SymmetricMatrix::zeros(3)).value == 0.0);
  const auto d = SymmetricMatrix::diagonal({1, 2, 3});
  CHECK(spectral_norm(d - d).value == 0.0);
  const auto r = d.affine_residual(2.0, -1.0, SymmetricMatrix::identity(3));
  CHECK(spectral_norm(r).value == doctest::Approx(4.0));
}

TEST_CASE("frobenius norm") {
  CHECK(frobenius_norm(Matrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(frobenius_norm(Matrix::Zero(3, 2)) == 0.0);
  CHECK(frobenius_norm(Matrix::Ones(2, 2)) == doctest::Approx(2.0));
}

TEST_CASE("cholesky") {
  CHECK((cholesky(SymmetricMatrix::identity(3)) - Matrix::Identity(3, 3)).norm() == 0.0);
  const Matrix l = cholesky(SymmetricMatrix::diagonal({4, 9}));
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(1, 1) == doctest::Approx(3.0));
  CHECK(l(0, 1) == 0.0);
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  const auto s = SymmetricMatrix::from_dense(m);
  const Matrix f = cholesky(s);
  CHECK((f * f.transpose() - m).norm() <= 1e-12 * m.norm());
  CHECK(f(0, 1) == 0.0);

  const auto indefinite = SymmetricMatrix::diagonal({1, -1});
  try {
    cholesky(indefinite);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("not positive definite") != std::string::npos);
    CHECK(std::string(e.what()).find("pivot 1") != std::string::npos);
  }
}

TEST_CASE("matrix files round-trip exactly") {
  const auto m = random_symmetric(6, 17);
  std::stringstream mm;
  io::write_matrix_market(mm, m);
  const Matrix back = io::read_matrix_market(mm);
  CHECK((back - m.dense()).cwiseAbs().maxCoeff() == 0.0);

  std::stringstream csv;
  io::write_csv(csv, m.dense());
  const Matrix back2 = io::read_csv(csv);
  CHECK((back2 - m.dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix market coordinate input") {
  std::stringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 3\n"
      "1 1 2.0\n"
      "2 1 -1.0\n"
      "3 3 4.5\n");
  const Matrix m = io::read_matrix_market(in);
  CHECK(m(0, 0) == 2.0);
  CHECK(m(0, 1) == -1.0);
  CHECK(m(1, 0) == -1.0);
  CHECK(m(2, 2) == 4.5);
  CHECK(m(1, 1) == 0.0);

  std::stringstream pattern(
      "%%MatrixMarket matrix coordinate pattern general\n"
      "2 2 2\n"
      "1 2\n"
      "2 1\n");
  const Matrix p = io::read_matrix_market(pattern);
  CHECK(p(0, 1) == 1.0);
  CHECK(p(1, 0) == 1.0);

  std::stringstream bad("not a banner\n");
  CHECK_THROWS_AS(io::read_matrix_market(bad), std::invalid_argument);
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv(ragged), std::invalid_argument);
}
