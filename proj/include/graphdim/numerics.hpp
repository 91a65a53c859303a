#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphdim/matrix.hpp"

namespace graphdim {

/// Eigenpairs of a symmetric matrix, eigenvalues non-increasing.
/// Column i of `vectors` belongs to `values[i]`; each column has its
/// largest-magnitude component positive.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Householder tridiagonalization followed by implicit QL. The input is
/// symmetrized as (S + S^T) / 2 first. Throws InvalidInput on non-finite
/// entries or a non-square matrix.
EigenDecomposition sym_eigen_desc(const Matrix& s);

/// Eigenvalues only (same ordering), skipping the vector accumulation.
std::vector<double> sym_eigenvalues_desc(const Matrix& s);

/// Singular values of A (rows >= cols), non-increasing. Golub-Kahan
/// bidiagonalization with implicit-shift QR; no singular vectors.
std::vector<double> singular_values(const Matrix& a);

double smallest_singular_value(const Matrix& a);

struct LeastSquaresSolution {
  std::vector<double> coef;
  std::size_t rank = 0;
};

/// Minimum-norm least-squares solution of X b ~ y via Householder QR with
/// column pivoting. Rank-deficient systems are resolved through a second,
/// full-rank problem over the free coordinates.
LeastSquaresSolution least_squares_solve(const Matrix& x, std::span<const double> y);

/// In-place Householder triangularization (no pivoting). On return the upper
/// triangle of the leading cols x cols block holds R with A = Q R; entries
/// below the diagonal are zeroed. Requires rows >= cols.
void householder_triangularize(Matrix& a);

/// Regularized incomplete beta I_x(a, b) by continued fraction. `one_minus_x`
/// may be supplied to avoid cancellation when x is close to 1.
double incomplete_beta(double a, double b, double x, double one_minus_x);
double incomplete_beta(double a, double b, double x);

/// P(F > f) for F ~ F(d1, d2). Throws InvalidInput for f < 0 or d1, d2 <= 0.
double f_survival(double f, double d1, double d2);

}  // namespace graphdim
