#include "dkbound/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dkbound::lp {

namespace {

constexpr double kEps = 1e-12;

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Solver {
 public:
  Solver(const Matrix& a, const Vector& b, const Vector& c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(Tableau::Zero(m_ + 2, n_ + 2)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_(i, j) = a(i, j);
      basic_[i] = n_ + i;
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = b(i);
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_(m_, j) = -c(j);
    }
    nonbasic_[n_] = -1;
    d_(m_ + 1, n_) = 1.0;
    pivot_cap_ = 200 * (m_ + n_ + 2);
  }

  LpResult solve() {
    LpResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && d_(r, n_ + 1) < -kEps) {
      pivot(r, n_);
      const Outcome ph = simplex(2);
      if (ph == Outcome::Limit) return finish(res, LpStatus::PivotLimit);
      if (ph != Outcome::Optimal || d_(m_ + 1, n_ + 1) < -kEps * scale_b()) {
        return finish(res, LpStatus::Infeasible);
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j) {
            if (std::make_pair(d_(i, j), nonbasic_[j]) < std::make_pair(d_(i, s), nonbasic_[s])) s = j;
          }
          pivot(i, s);
        }
      }
    }
    const Outcome ph = simplex(1);
    if (ph == Outcome::Limit) return finish(res, LpStatus::PivotLimit);
    if (ph == Outcome::Unbounded) return finish(res, LpStatus::Unbounded);
    res.x = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) res.x(basic_[i]) = d_(i, n_ + 1);
    }
    res.value = d_(m_, n_ + 1);
    return finish(res, LpStatus::Optimal);
  }

 private:
  enum class Outcome { Optimal, Unbounded, Limit };

  double scale_b() const {
    double s = 1.0;
    for (int i = 0; i < m_; ++i) s = std::max(s, std::abs(d_(i, n_ + 1)));
    return s;
  }

  LpResult& finish(LpResult& res, LpStatus st) {
    res.status = st;
    res.pivots = pivots_;
    if (st == LpStatus::Infeasible) res.value = -std::numeric_limits<double>::infinity();
    if (st == LpStatus::Unbounded) res.value = std::numeric_limits<double>::infinity();
    return res;
  }

  void pivot(int r, int s) {
    ++pivots_;
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::abs(d_(i, s)) <= kEps * 1e-3) continue;
      const double f = d_(i, s) * inv;
      d_.row(i) -= f * d_.row(r);
      d_(i, s) = d_(r, s) * f;
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) d_(r, j) *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) d_(i, s) *= -inv;
    }
    d_(r, s) = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  Outcome simplex(int phase) {
    const int x = m_ + phase - 1;
    int degenerate_run = 0;
    for (;;) {
      if (pivots_ > pivot_cap_) return Outcome::Limit;
      const bool bland = degenerate_run > 50;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (bland) {
          if (d_(x, j) < -kEps && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
        } else if (s == -1 || std::make_pair(d_(x, j), nonbasic_[j]) <
                                  std::make_pair(d_(x, s), nonbasic_[s])) {
          s = j;
        }
      }
      if (s == -1 || d_(x, s) >= -kEps) return Outcome::Optimal;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_(i, s) <= kEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d_(i, n_ + 1) / d_(i, s);
        const double rhs = d_(r, n_ + 1) / d_(r, s);
        if (lhs < rhs || (lhs == rhs && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return Outcome::Unbounded;
      const double before = d_(m_, n_ + 1);
      pivot(r, s);
      degenerate_run = (d_(m_, n_ + 1) == before) ? degenerate_run + 1 : 0;
    }
  }

  int m_, n_;
  std::vector<int> nonbasic_, basic_;
  Tableau d_;
  int pivots_ = 0;
  int pivot_cap_ = 0;
};

}  // namespace

LpResult maximize(const Matrix& a, const Vector& b, const Vector& c) {
  if (a.rows() != b.size() || (a.rows() > 0 && a.cols() != c.size())) {
    throw std::invalid_argument("lp::maximize: dimension mismatch");
  }
  Solver s(a, b, c);
  return s.solve();
}

LpResult maximize_boxed(const Matrix& a, const Vector& b, const Vector& c,
                        const Vector& lower, const Vector& upper) {
  const int n = static_cast<int>(c.size());
  if (lower.size() != n || upper.size() != n || a.cols() != n || a.rows() != b.size()) {
    throw std::invalid_argument("lp::maximize_boxed: dimension mismatch");
  }
  // x = lower + w .* xs with w the box width, so every bounded column lives
  // in [0, 1]; reduced-cost tolerances then mean the same thing for every
  // column regardless of how wide the caller's box is.
  Vector w = Vector::Ones(n);
  int extra = 0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(lower(i))) throw std::invalid_argument("lp::maximize_boxed: lower bound must be finite");
    if (std::isfinite(upper(i))) {
      ++extra;
      if (upper(i) - lower(i) > 0.0) w(i) = upper(i) - lower(i);
    }
  }
  const int m = static_cast<int>(a.rows());
  Matrix aa = Matrix::Zero(m + extra, n);
  Vector bb(m + extra);
  aa.topRows(m) = a * w.asDiagonal();
  bb.head(m) = b - a * lower;
  for (int i = 0; i < m; ++i) {
    const double s = aa.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      aa.row(i) /= s;
      bb(i) /= s;
    }
  }
  int row = m;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(upper(i))) continue;
    aa(row, i) = 1.0;
    bb(row) = (upper(i) - lower(i)) / w(i);
    ++row;
  }
  const Vector cs = c.cwiseProduct(w);
  LpResult res = maximize(aa, bb, cs);
  if (res.status == LpStatus::Optimal) {
    res.x = lower + w.cwiseProduct(res.x);
    res.value = c.dot(res.x);
  }
  return res;
}

}  // namespace dkbound::lp
