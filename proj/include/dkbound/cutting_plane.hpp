#pragma once

#include "dkbound/simplex.hpp"

#include <vector>

namespace dkbound {

/// Master problem of a Kelley cutting-plane loop: maximize a linear objective
/// over a box intersected with an accumulating set of half-spaces a.x <= b.
/// Rows are normalized to unit max-coefficient on entry and exact duplicates
/// are dropped, so repeated cuts from the same eigenvector are harmless.
class KelleyMaster {
 public:
  KelleyMaster(Vector objective, Vector lower, Vector upper);

  /// Returns false if the row duplicated an existing one.
  bool add_row(const Vector& a, double b);
  void set_bounds(int i, double lower, double upper);

  lp::LpResult solve() const;

  int dim() const { return static_cast<int>(objective_.size()); }
  int rows() const { return static_cast<int>(rows_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  /// True if x_i sits on a finite face of the box (relative tolerance).
  bool on_box_face(const Vector& x, int i) const;

 private:
  struct Row {
    Vector a;
    double b;
  };
  Vector objective_, lower_, upper_;
  std::vector<Row> rows_;
};

}  // namespace dkbound
