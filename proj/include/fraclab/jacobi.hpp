#pragma once

#include <vector>

namespace fraclab {

/// Dense symmetric eigensolver by cyclic Jacobi rotations.
/// A is row-major n x n and is destroyed.  On return `evals` holds the
/// eigenvalues in ascending order and column j of row-major `V` the
/// matching orthonormal eigenvector.
///
/// The parallel variant runs round-robin rounds of disjoint rotations with
/// OpenMP; results are deterministic (independent of thread count) but the
/// rotation ordering differs from the serial sweep, so eigenvectors may
/// differ within degenerate eigenspaces.
void jacobi_eigensolve_serial(std::vector<double>& A, int n,
                              std::vector<double>& evals,
                              std::vector<double>& V,
                              double tol = 1e-12, int max_sweeps = 60);

void jacobi_eigensolve_parallel(std::vector<double>& A, int n,
                                std::vector<double>& evals,
                                std::vector<double>& V,
                                double tol = 1e-12, int max_sweeps = 60);

}  // namespace fraclab
