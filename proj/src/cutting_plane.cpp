#include "dkbound/cutting_plane.hpp"

#include <cmath>
#include <stdexcept>

namespace dkbound {

KelleyMaster::KelleyMaster(Vector objective, Vector lower, Vector upper)
    : objective_(std::move(objective)), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != objective_.size() || upper_.size() != objective_.size()) {
    throw std::invalid_argument("KelleyMaster: bound dimension mismatch");
  }
}

bool KelleyMaster::add_row(const Vector& a, double b) {
  if (a.size() != objective_.size()) throw std::invalid_argument("KelleyMaster: row dimension mismatch");
  const double s = a.cwiseAbs().maxCoeff();
  if (!(s > 0.0) || !std::isfinite(s) || !std::isfinite(b)) return false;
  Row row{a / s, b / s};
  for (const auto& r : rows_) {
    if ((r.a - row.a).cwiseAbs().maxCoeff() <= 1e-14 &&
        std::abs(r.b - row.b) <= 1e-14 * (1.0 + std::abs(row.b))) {
      return false;
    }
  }
  rows_.push_back(std::move(row));
  return true;
}

void KelleyMaster::set_bounds(int i, double lower, double upper) {
  lower_(i) = lower;
  upper_(i) = upper;
}

lp::LpResult KelleyMaster::solve() const {
  const int m = rows();
  Matrix a(m, dim());
  Vector b(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = rows_[i].a.transpose();
    b(i) = rows_[i].b;
  }
  return lp::maximize_boxed(a, b, objective_, lower_, upper_);
}

bool KelleyMaster::on_box_face(const Vector& x, int i) const {
  const double width = std::isfinite(upper_(i)) ? upper_(i) - lower_(i) : 0.0;
  const double tol = 1e-9 * std::max(1.0, width);
  if (std::isfinite(upper_(i)) && x(i) >= upper_(i) - tol) return true;
  return std::abs(x(i) - lower_(i)) <= tol && lower_(i) != 0.0;
}

}  // namespace dkbound
