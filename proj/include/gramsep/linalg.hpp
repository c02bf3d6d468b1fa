#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>

namespace gramsep {

using HermitianMatrix = Eigen::MatrixXcd;

/// Eigenvalues of a Hermitian matrix in ascending order (lower triangle is read).
Eigen::VectorXd hermitian_eigenvalues(const HermitianMatrix& m);

double min_eigenvalue(const HermitianMatrix& m);
double max_eigenvalue(const HermitianMatrix& m);

/// Principal submatrix on the given index set.
HermitianMatrix principal_submatrix(const HermitianMatrix& m, std::span<const std::size_t> idx);

/// Largest entrywise deviation from Hermitian symmetry.
double hermitian_defect(const HermitianMatrix& m);

/// Runs body(i) for i in [0, n) on a small worker pool; every index is
/// visited exactly once, so writes to per-index slots stay deterministic.
/// An exception from body is rethrown (the one with the smallest index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gramsep
