#pragma once

#include "gnnbench/matrix.hpp"

#include <vector>

namespace gnnbench::linalg {

/// Solve A X = B with partial-pivot Gaussian elimination. A (n x n) and B
/// (n x m) are overwritten; B holds the solution on return. Throws on a
/// numerically singular pivot. Intended for small oracle-sized systems.
void lu_solve_inplace(DenseMatrix& a, DenseMatrix& b);

/// Eigenvalues of a symmetric matrix via cyclic Jacobi rotations, sorted
/// ascending. Small-instance diagnostic use only.
std::vector<double> sym_eigenvalues(DenseMatrix a);

} // namespace gnnbench::linalg
