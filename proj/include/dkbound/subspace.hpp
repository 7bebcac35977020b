#pragma once

#include "dkbound/spectra.hpp"

namespace dkbound {

/// r consecutive eigenvectors of an n x n symmetric matrix, starting after
/// offset j. `basis` has orthonormal columns.
struct EigenvectorBlock {
  int n = 0;
  int r = 0;
  int j = 0;
  Matrix basis;
};

/// Columns j+1..j+r (1-based) of the ascending eigenvector matrix. With
/// `reverse` the ordering is flipped to descending first, which is the block
/// of -M, so j = 1, r = 2 addresses the second and third largest eigenvalues.
EigenvectorBlock block(const EigenSystem& es, int j, int r, bool reverse = false);

/// sqrt(2 * min(r, n - r)).
double scaling_constant(int n, int r);

/// Cosines of the principal angles between span(W) and span(V), descending,
/// clamped to [0, 1].
Vector principal_cosines(const EigenvectorBlock& w, const EigenvectorBlock& v);

/// Sines of the principal angles, ascending (paired with the descending
/// cosines). Computed from (I - V V^T) W so that small angles keep full
/// relative accuracy.
Vector principal_sines(const EigenvectorBlock& w, const EigenvectorBlock& v);

/// inf over orthogonal R of ||W - V R||_F.
double rho1(const EigenvectorBlock& w, const EigenvectorBlock& v);

/// ||W W^T (I - V V^T)||_2, the sine of the largest principal angle.
double rho2(const EigenvectorBlock& w, const EigenvectorBlock& v);

/// Bound that holds for any pair of blocks: 1 on the rescaled scale (all
/// distances divided by scaling_constant), scaling_constant(n, r) raw.
double trivial_bound();
double trivial_bound_raw(int n, int r);

}  // namespace dkbound
