#pragma once

#include "dkbound/spectra.hpp"

#include <iosfwd>
#include <string>

namespace dkbound::io {

// Matrix Market: reads `coordinate` (real, integer or pattern) and `array`
// (real or integer) bodies with `general` or `symmetric` symmetry. Writes
// `array real symmetric` (lower triangle, column major).
//
// CSV: square numeric grid, comma separated, no header.
//
// Writers emit 17 significant digits so a write/read cycle reproduces every
// double exactly.

Matrix read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const SymmetricMatrix& m);

Matrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const Matrix& m);

/// Dispatches on extension: `.mtx` for Matrix Market, anything else as CSV.
/// The result goes through SymmetricMatrix::from_dense, so asymmetric input
/// is rejected.
SymmetricMatrix load_symmetric(const std::string& path);
void save_symmetric(const std::string& path, const SymmetricMatrix& m);

}  // namespace dkbound::io
