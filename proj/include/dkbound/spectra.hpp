#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace dkbound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when an iterative numerical kernel fails to converge or a
/// factorization hits a structural obstruction (non-positive pivot).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense real symmetric n x n matrix. Construction enforces exact symmetry:
/// `from_dense` rejects inputs whose asymmetry exceeds 1e-12 * max|X| and then
/// mirrors the upper triangle; `symmetrized` always averages with the
/// transpose.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  static SymmetricMatrix from_dense(const Matrix& m);
  static SymmetricMatrix symmetrized(const Matrix& m);
  static SymmetricMatrix identity(int n);
  static SymmetricMatrix zeros(int n);
  static SymmetricMatrix diagonal(const std::vector<double>& d);

  int order() const { return static_cast<int>(m_.rows()); }
  const Matrix& dense() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymmetricMatrix operator-() const;
  SymmetricMatrix scaled(double s) const;

  /// c1 * this + c0 * I - other, the residual of an affine spectral map.
  SymmetricMatrix affine_residual(double c1, double c0,
                                  const SymmetricMatrix& other) const;

  friend SymmetricMatrix operator+(const SymmetricMatrix& a,
                                   const SymmetricMatrix& b);
  friend SymmetricMatrix operator-(const SymmetricMatrix& a,
                                   const SymmetricMatrix& b);

 private:
  explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Ascending eigenvalues and the matching orthonormal eigenvectors
/// (column i belongs to values[i]). Each column is normalized so that its
/// entry of largest magnitude is nonnegative, first index winning ties.
struct EigenSystem {
  Vector values;
  Matrix vectors;

  int order() const { return static_cast<int>(values.size()); }
};

EigenSystem eigh(const SymmetricMatrix& m);

/// Eigenvalues only, ascending.
Vector eigvalsh(const SymmetricMatrix& m);

struct SpectralNorm {
  double value = 0.0;
  Vector vector;  // unit eigenvector of the eigenvalue with largest |.|
  int sign = 1;   // sign of that eigenvalue
};

SpectralNorm spectral_norm(const SymmetricMatrix& m);
SpectralNorm spectral_norm(const EigenSystem& es);

double frobenius_norm(const Matrix& m);

/// Lower-triangular L with L * L^T = m. Throws NumericalError naming the
/// failing pivot when m is not positive definite.
Matrix cholesky(const SymmetricMatrix& m);

}  // namespace dkbound
