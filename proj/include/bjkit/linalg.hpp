#pragma once

// Dense Hermitian eigensolver, SVD and a few small solvers. Dimensions here
// are desk scale (n <= 64), so everything is built on cyclic complex Jacobi.

#include <span>
#include <vector>

#include "bjkit/matrix.hpp"

namespace bjkit {

struct EigResult {
  std::vector<double> values;  // nonincreasing
  CMatrix vectors;             // orthonormal columns, vectors.column(i) <-> values[i]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Throws dimension_mismatch for non-square input and not_hermitian when
/// max|A - A*| exceeds tol * max|A|. The input is symmetrized before the
/// sweeps start.
EigResult hermitian_eig(const CMatrix& a, double tol = 1e-10);

/// Largest eigenvalue together with one unit eigenvector.
struct TopEigen {
  double value;
  double next;  // second largest eigenvalue (equal to value when n == 1)
  std::vector<cplx> vector;
};
TopEigen top_eigen(const CMatrix& hermitian);

struct SvdResult {
  std::vector<double> values;  // nonincreasing, length min(rows, cols)
  CMatrix left;                // rows x rows, unitary
  CMatrix right;               // cols x cols, unitary
};

/// A = left * diag(values) * right^*, computed from the eigendecomposition
/// of A^*A. Left vectors for nonzero singular values are A v / sigma with the
/// phase fixed so that the largest entry of each right vector is real and
/// positive; the rest of the left basis is completed by Gram-Schmidt.
SvdResult svd(const CMatrix& a, double tol = 1e-12);

double spectral_norm(const CMatrix& a);
double trace_norm(const CMatrix& a);

/// Solves A X = B by LU with partial pivoting. Throws invalid_argument when
/// A is numerically singular.
CMatrix solve(const CMatrix& a, const CMatrix& b);

/// Euclidean projection of a nonnegative vector onto {s >= 0, sum s <= radius}.
std::vector<double> project_l1_ball_nonneg(std::span<const double> v, double radius = 1.0);

/// Euclidean projection onto the simplex {s >= 0, sum s = 1}.
std::vector<double> project_simplex(std::span<const double> v);

/// Orthonormalizes the columns in place (modified Gram-Schmidt, two passes).
/// Columns that become numerically dependent are replaced by unit vectors
/// orthogonal to the previous ones.
void orthonormalize_columns(CMatrix& q);

}  // namespace bjkit
