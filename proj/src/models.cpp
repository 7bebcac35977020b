#include "dkbound/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace dkbound {

std::vector<int> equal_block_sizes(int n, int k) {
  if (k < 1 || n < k) {
    std::ostringstream os;
    os << "cannot split " << n << " nodes into " << k << " non-empty blocks";
    throw std::invalid_argument(os.str());
  }
  std::vector<int> sizes(k, n / k);
  for (int i = 0; i < n % k; ++i) ++sizes[i];
  return sizes;
}

int SbmParams::n() const { return std::accumulate(block_sizes.begin(), block_sizes.end(), 0); }

std::vector<int> SbmParams::membership() const {
  std::vector<int> label;
  label.reserve(n());
  for (int b = 0; b < blocks(); ++b) label.insert(label.end(), block_sizes[b], b);
  return label;
}

Matrix SbmParams::edge_probabilities() const {
  const auto label = membership();
  const int nn = static_cast<int>(label.size());
  Matrix p(nn, nn);
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nn; ++j) p(i, j) = label[i] == label[j] ? p_within : p_between;
  }
  return p;
}

void SbmParams::validate() const {
  if (block_sizes.empty()) throw std::invalid_argument("SBM needs at least one block");
  for (int s : block_sizes) {
    if (s < 1) throw std::invalid_argument("SBM block sizes must be positive");
  }
  if (n() < 2) throw std::invalid_argument("SBM needs n >= 2");
  if (!(p_within >= 0.0 && p_within <= 1.0 && p_between >= 0.0 && p_between <= 1.0)) {
    throw std::invalid_argument("SBM probabilities must lie in [0, 1]");
  }
}

SbmParams SbmParams::equal(int n, int k, double p_within, double p_between) {
  return {equal_block_sizes(n, k), p_within, p_between};
}

IsolatedVertexError::IsolatedVertexError(int vertex)
    : std::runtime_error("vertex " + std::to_string(vertex) + " has zero degree, L_sym undefined"),
      vertex_(vertex) {}

GraphOperators graph_operators(const Matrix& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  GraphOperators ops;
  ops.A = SymmetricMatrix::from_dense(adjacency);
  ops.degrees.resize(n);
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    d(i) = adjacency.row(i).sum();
    ops.degrees[i] = static_cast<int>(std::lround(d(i)));
  }
  Matrix l = -adjacency;
  l.diagonal() += d;
  ops.L = SymmetricMatrix::from_dense(l);
  for (int i = 0; i < n; ++i) {
    if (!(d(i) > 0.0)) throw IsolatedVertexError(i);
  }
  const Vector s = d.cwiseSqrt().cwiseInverse();
  ops.L_sym = SymmetricMatrix::symmetrized(s.asDiagonal() * l * s.asDiagonal());
  return ops;
}

GraphOperators sample_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const Matrix prob = params.edge_probabilities();
  const int n = params.n();
  Stream rng(seed);
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(prob(i, j))) a(i, j) = a(j, i) = 1.0;
    }
  }
  return graph_operators(a);
}

ResampledGraph sample_sbm_resampling(const SbmParams& params, std::uint64_t seed, int max_attempts) {
  for (int k = 0; k < max_attempts; ++k) {
    const std::uint64_t s = k == 0 ? seed : Stream(seed).split(static_cast<std::uint64_t>(k)).key();
    try {
      return {sample_sbm(params, s), k + 1};
    } catch (const IsolatedVertexError&) {
      if (k + 1 == max_attempts) throw;
    }
  }
  throw std::invalid_argument("max_attempts must be positive");
}

GeneratingMatrices generating_matrices(const SbmParams& params) {
  params.validate();
  Matrix ba = params.edge_probabilities();
  ba.diagonal().setZero();
  const Vector d = ba.rowwise().sum();
  for (int i = 0; i < d.size(); ++i) {
    if (!(d(i) > 0.0)) {
      throw std::invalid_argument("node " + std::to_string(i) +
                                  " has zero expected degree, B_Lsym undefined");
    }
  }
  Matrix bl = -ba;
  bl.diagonal() += d;
  const Vector s = d.cwiseSqrt().cwiseInverse();
  return {SymmetricMatrix::from_dense(ba), SymmetricMatrix::from_dense(bl),
          SymmetricMatrix::symmetrized(s.asDiagonal() * bl * s.asDiagonal())};
}

int degree_extreme_difference(const GraphOperators& ops) {
  if (ops.degrees.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(ops.degrees.begin(), ops.degrees.end());
  return *hi - *lo;
}

SpikedCovParams SpikedCovParams::equal(int p, int r_spike, double p_within, double p_between, int N) {
  return {p, equal_block_sizes(p, r_spike), p_within, p_between, N};
}

SymmetricMatrix spiked_covariance(const SpikedCovParams& params) {
  const int k = params.r_spike();
  if (k < 1) throw std::invalid_argument("spiked covariance needs at least one block");
  int total = 0;
  for (int s : params.block_sizes) {
    if (s < 1) throw std::invalid_argument("spiked covariance block sizes must be positive");
    total += s;
  }
  if (total != params.p) {
    std::ostringstream os;
    os << "block sizes sum to " << total << ", expected p = " << params.p;
    throw std::invalid_argument(os.str());
  }
  Matrix pm = Matrix::Constant(k, k, params.p_between);
  pm.diagonal().setConstant(params.p_within);
  const Vector ev = eigvalsh(SymmetricMatrix::from_dense(pm));
  if (ev(0) < -1e-12 * std::max(1.0, pm.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "block matrix P is not positive semidefinite (smallest eigenvalue " << ev(0) << ")";
    throw std::invalid_argument(os.str());
  }
  SbmParams shape{params.block_sizes, params.p_within, params.p_between};
  Matrix sigma = shape.edge_probabilities();
  sigma.diagonal().array() += 1.0;
  return SymmetricMatrix::from_dense(sigma);
}

SymmetricMatrix sample_covariance_from(const SymmetricMatrix& sigma, const Matrix& z) {
  if (z.rows() != sigma.order() || z.cols() < 1) {
    throw std::invalid_argument("Z must be p x N with N >= 1");
  }
  const Matrix x = cholesky(sigma) * z;
  return SymmetricMatrix::symmetrized(x * x.transpose() / static_cast<double>(z.cols()));
}

SymmetricMatrix sample_covariance(const SymmetricMatrix& sigma, int N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("sample count N must be positive");
  const int p = sigma.order();
  Stream rng(seed);
  Matrix z(p, N);
  for (int c = 0; c < N; ++c) {
    for (int r = 0; r < p; ++r) z(r, c) = rng.normal();
  }
  return sample_covariance_from(sigma, z);
}

}  // namespace dkbound
