#pragma once

#include <vector>

#include "risim/complex_matrix.hpp"

namespace risim {

/// Thin SVD h = U diag(q) V^H with k = min(rows, cols) columns in each basis.
/// Singular values are sorted descending; ties keep their pre-sort column
/// order. Zero singular values get orthonormal filler columns, so both bases
/// always have orthonormal columns (the all-zero matrix yields identity
/// bases).
struct SvdResult {
    ComplexMatrix left_vectors;            // rows x k
    std::vector<double> singular_values;   // length k, descending, >= 0
    ComplexMatrix right_vectors;           // cols x k
};

/// One-sided Jacobi SVD. Rotations orthogonalize the columns of a working
/// copy while the accumulated rotations form the right basis. Capped at 100
/// sweeps with a 1e-12 relative off-diagonal threshold; hitting the cap
/// raises NumericalError carrying the worst remaining residual.
SvdResult svd(const ComplexMatrix& h);

}  // namespace risim
