#pragma once

#include "dkbound/rng.hpp"
#include "dkbound/spectra.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dkbound {

/// n split into K blocks as evenly as possible; the first n mod K blocks get
/// one extra node.
std::vector<int> equal_block_sizes(int n, int k);

/// Stochastic blockmodel with two-valued block probability matrix P
/// (p_within on the diagonal, p_between elsewhere).
struct SbmParams {
  std::vector<int> block_sizes;
  double p_within = 0.0;
  double p_between = 0.0;

  int n() const;
  int blocks() const { return static_cast<int>(block_sizes.size()); }
  /// Block label of every node.
  std::vector<int> membership() const;
  /// Edge probability matrix M P M^T (diagonal included).
  Matrix edge_probabilities() const;
  void validate() const;

  static SbmParams equal(int n, int k, double p_within, double p_between);
};

struct GraphOperators {
  SymmetricMatrix A;      // adjacency, zero diagonal
  SymmetricMatrix L;      // D - A
  SymmetricMatrix L_sym;  // D^{-1/2} L D^{-1/2}
  std::vector<int> degrees;
};

class IsolatedVertexError : public std::runtime_error {
 public:
  IsolatedVertexError(int vertex);
  int vertex() const { return vertex_; }

 private:
  int vertex_;
};

/// Operators of a 0/1 symmetric adjacency matrix. Throws IsolatedVertexError
/// for a zero-degree vertex (L_sym undefined).
GraphOperators graph_operators(const Matrix& adjacency);

/// Upper triangle drawn row by row with one uniform per pair, mirrored.
GraphOperators sample_sbm(const SbmParams& params, std::uint64_t seed);

struct ResampledGraph {
  GraphOperators ops;
  int attempts = 1;
};

/// Redraws with seeds split from `seed` while a vertex is isolated, at most
/// `max_attempts` draws; the attempt count is returned so that resampling is
/// visible to the caller. Rethrows the last error when all attempts fail.
ResampledGraph sample_sbm_resampling(const SbmParams& params, std::uint64_t seed,
                                     int max_attempts = 100);

struct GeneratingMatrices {
  SymmetricMatrix B_A;     // M P M^T - diag(M P M^T)
  SymmetricMatrix B_L;     // diag(B_A 1) - B_A
  SymmetricMatrix B_Lsym;  // diag(B_A 1)^{-1/2} B_L diag(B_A 1)^{-1/2}
};

GeneratingMatrices generating_matrices(const SbmParams& params);

int degree_extreme_difference(const GraphOperators& ops);

struct SpikedCovParams {
  int p = 0;
  std::vector<int> block_sizes;  // r_spike blocks summing to p
  double p_within = 0.0;
  double p_between = 0.0;
  int N = 0;

  int r_spike() const { return static_cast<int>(block_sizes.size()); }
  static SpikedCovParams equal(int p, int r_spike, double p_within, double p_between, int N);
};

/// Sigma = M P M^T + I. Throws std::invalid_argument if P is not PSD.
SymmetricMatrix spiked_covariance(const SpikedCovParams& params);

/// X X^T / N with X = chol(Sigma) Z, Z p x N standard normal from the stream
/// for `seed` (filled column by column). No mean centering.
SymmetricMatrix sample_covariance(const SymmetricMatrix& sigma, int N, std::uint64_t seed);

/// Same estimator with Z supplied by the caller.
SymmetricMatrix sample_covariance_from(const SymmetricMatrix& sigma, const Matrix& z);

}  // namespace dkbound
