#include "dkbound/spectra.hpp"

#include <cmath>
#include <sstream>

namespace dkbound {

namespace {

void require_finite(const Matrix& m) {
  if (!m.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
}

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw std::invalid_argument(os.str());
  }
}

// Largest-magnitude entry of every column made nonnegative; ties go to the
// lowest row index.
void fix_signs(Matrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      const double a = std::abs(v(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (v(arg, c) < 0.0) v.col(c) = -v.col(c);
  }
}

}  // namespace

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& m) {
  require_square(m);
  require_finite(m);
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream os;
    os << "matrix is not symmetric: max|X - X^T| = " << asym
       << " exceeds 1e-12 * max|X| = " << 1e-12 * scale;
    throw std::invalid_argument(os.str());
  }
  Matrix s = m.triangularView<Eigen::Upper>();
  s.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
  return SymmetricMatrix(std::move(s));
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Matrix& m) {
  require_square(m);
  require_finite(m);
  return SymmetricMatrix(0.5 * (m + m.transpose()));
}

SymmetricMatrix SymmetricMatrix::identity(int n) {
  return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::zeros(int n) {
  return SymmetricMatrix(Matrix::Zero(n, n));
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  Vector v = Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
  Matrix m = v.asDiagonal();
  require_square(m);
  require_finite(m);
  return SymmetricMatrix(std::move(m));
}

SymmetricMatrix SymmetricMatrix::operator-() const { return SymmetricMatrix(-m_); }

SymmetricMatrix SymmetricMatrix::scaled(double s) const {
  return SymmetricMatrix(s * m_);
}

SymmetricMatrix SymmetricMatrix::affine_residual(double c1, double c0,
                                                 const SymmetricMatrix& other) const {
  Matrix r = c1 * m_ - other.m_;
  r.diagonal().array() += c0;
  return SymmetricMatrix(std::move(r));
}

SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  return SymmetricMatrix(a.m_ + b.m_);
}

SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  return SymmetricMatrix(a.m_ - b.m_);
}

EigenSystem eigh(const SymmetricMatrix& m) {
  const Matrix& a = m.dense();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    const Matrix v = solver.eigenvectors();
    Matrix t = v.transpose() * a * v;
    t.diagonal().setZero();
    std::ostringstream os;
    os << "symmetric eigensolver did not converge (n = " << a.rows()
       << ", off-diagonal residual = " << t.cwiseAbs().maxCoeff() << ")";
    throw NumericalError(os.str());
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  fix_signs(es.vectors);
  return es;
}

Vector eigvalsh(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symmetric eigensolver did not converge (n = " << m.order() << ")";
    throw NumericalError(os.str());
  }
  return solver.eigenvalues();
}

SpectralNorm spectral_norm(const EigenSystem& es) {
  const Eigen::Index n = es.values.size();
  const double lo = es.values(0);
  const double hi = es.values(n - 1);
  SpectralNorm out;
  if (std::abs(lo) > std::abs(hi)) {
    out.value = std::abs(lo);
    out.vector = es.vectors.col(0);
    out.sign = -1;
  } else {
    out.value = std::abs(hi);
    out.vector = es.vectors.col(n - 1);
    out.sign = 1;
  }
  return out;
}

SpectralNorm spectral_norm(const SymmetricMatrix& m) { return spectral_norm(eigh(m)); }

double frobenius_norm(const Matrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  return m.norm();
}

Matrix cholesky(const SymmetricMatrix& m) {
  const Matrix& a = m.dense();
  const Eigen::Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "matrix is not positive definite (pivot " << j << " = " << d << ")";
      throw NumericalError(os.str());
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return l;
}

}  // namespace dkbound
