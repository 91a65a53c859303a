#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphdim/error.hpp"
#include "graphdim/numerics.hpp"

namespace graphdim {
namespace {

// Reflects rows [col, m) of `a` so that column `col` becomes (alpha, 0, ...).
// The same reflection is applied to columns (col, n) and to `rhs` if given.
// Returns alpha (the new diagonal entry).
double reflect_column(Matrix& a, std::size_t col, std::vector<double>* rhs) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  double norm = 0.0;
  for (std::size_t i = col; i < m; ++i) norm = std::hypot(norm, a(i, col));
  if (norm == 0.0) return 0.0;
  const double alpha = a(col, col) > 0.0 ? -norm : norm;

  std::vector<double> v(m - col);
  for (std::size_t i = col; i < m; ++i) v[i - col] = a(i, col);
  v[0] -= alpha;
  double vnorm2 = 0.0;
  for (double x : v) vnorm2 += x * x;
  if (vnorm2 == 0.0) {
    // already of the form (alpha, 0, ...)
    a(col, col) = alpha;
    return alpha;
  }
  const double scale = 2.0 / vnorm2;

  for (std::size_t j = col + 1; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = col; i < m; ++i) s += v[i - col] * a(i, j);
    s *= scale;
    if (s == 0.0) continue;
    for (std::size_t i = col; i < m; ++i) a(i, j) -= s * v[i - col];
  }
  if (rhs) {
    double s = 0.0;
    for (std::size_t i = col; i < m; ++i) s += v[i - col] * (*rhs)[i];
    s *= scale;
    for (std::size_t i = col; i < m; ++i) (*rhs)[i] -= s * v[i - col];
  }
  a(col, col) = alpha;
  for (std::size_t i = col + 1; i < m; ++i) a(i, col) = 0.0;
  return alpha;
}

std::vector<double> back_substitute(const Matrix& r, std::span<const double> c, std::size_t n) {
  std::vector<double> x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = c[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * x[j];
    x[ii] = s / r(ii, ii);
  }
  return x;
}

// Least squares for a matrix known to have full column rank.
std::vector<double> solve_full_rank(Matrix a, std::vector<double> b) {
  const std::size_t n = a.cols();
  for (std::size_t k = 0; k < n; ++k) reflect_column(a, k, &b);
  return back_substitute(a, b, n);
}

}  // namespace

void householder_triangularize(Matrix& a) {
  if (a.rows() < a.cols()) throw InvalidInput("householder_triangularize: need rows >= cols");
  for (std::size_t k = 0; k < a.cols(); ++k) reflect_column(a, k, nullptr);
}

LeastSquaresSolution least_squares_solve(const Matrix& x, std::span<const double> y) {
  const std::size_t m = x.rows();
  const std::size_t k = x.cols();
  if (k == 0 || m < k) throw InvalidInput("least_squares_solve: need rows >= cols >= 1");
  if (y.size() != m) throw InvalidInput("least_squares_solve: response length mismatch");
  if (!x.all_finite() || !std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); }))
    throw InvalidInput("least_squares_solve: non-finite entry");

  Matrix a = x;
  std::vector<double> b(y.begin(), y.end());
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);

  // Column pivoting on the remaining-column norms.
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t best = col;
    double best_norm = -1.0;
    for (std::size_t j = col; j < k; ++j) {
      double s = 0.0;
      for (std::size_t i = col; i < m; ++i) s += a(i, j) * a(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != col) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, col), a(i, best));
      std::swap(perm[col], perm[best]);
    }
    reflect_column(a, col, &b);
  }

  const double tol = static_cast<double>(std::max(m, k)) * 0x1p-52 * std::abs(a(0, 0));
  std::size_t rank = 0;
  while (rank < k && std::abs(a(rank, rank)) > tol) ++rank;

  std::vector<double> permuted(k, 0.0);
  if (rank > 0) {
    std::vector<double> basic = back_substitute(a, b, rank);
    if (rank < k) {
      // Free coordinates z minimize |basic - W z|^2 + |z|^2 with W = R11^{-1} R12.
      const std::size_t f = k - rank;
      Matrix w(rank + f, f);
      for (std::size_t j = 0; j < f; ++j) {
        std::vector<double> col(rank);
        for (std::size_t i = 0; i < rank; ++i) col[i] = a(i, rank + j);
        const auto wcol = back_substitute(a, col, rank);
        for (std::size_t i = 0; i < rank; ++i) w(i, j) = wcol[i];
        w(rank + j, j) = 1.0;
      }
      std::vector<double> target(rank + f, 0.0);
      std::copy(basic.begin(), basic.end(), target.begin());
      const auto z = solve_full_rank(w, target);
      for (std::size_t i = 0; i < rank; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < f; ++j) s += w(i, j) * z[j];
        basic[i] -= s;
      }
      for (std::size_t j = 0; j < f; ++j) permuted[rank + j] = z[j];
    }
    std::copy(basic.begin(), basic.end(), permuted.begin());
  }

  LeastSquaresSolution out{std::vector<double>(k, 0.0), rank};
  for (std::size_t j = 0; j < k; ++j) out.coef[perm[j]] = permuted[j];
  return out;
}

}  // namespace graphdim
