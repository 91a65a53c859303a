// Symmetric eigensolver: Householder reduction to tridiagonal form followed by
// the implicit QL algorithm (the EISPACK tred2/tql2 pair).

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphdim/error.hpp"
#include "graphdim/numerics.hpp"

namespace graphdim {
namespace {

constexpr double kEps = 0x1p-52;

// v holds the symmetric input on entry and the accumulated transformation on
// exit; d receives the diagonal, e the sub-diagonal (e[0] = 0).
void tridiagonalize(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = v.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate the reflections.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

void implicit_ql(std::vector<double>& d, std::vector<double>& e, Matrix& v, bool want_vectors) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw InvalidInput("sym_eigen_desc: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (want_vectors) {
            for (std::size_t k = 0; k < n; ++k) {
              h = v(k, i + 1);
              v(k, i + 1) = s * v(k, i) + c * h;
              v(k, i) = c * v(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

Matrix symmetrized(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0)
    throw InvalidInput("sym_eigen_desc: matrix must be square and non-empty");
  if (!s.all_finite()) throw InvalidInput("sym_eigen_desc: non-finite entry");
  const std::size_t n = s.rows();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = 0.5 * (s(i, j) + s(j, i));
  return v;
}

}  // namespace

EigenDecomposition sym_eigen_desc(const Matrix& s) {
  Matrix v = symmetrized(s);
  const std::size_t n = v.rows();
  std::vector<double> d(n), e(n);
  if (n == 1) return {{v(0, 0)}, Matrix::identity(1)};
  tridiagonalize(v, d, e);
  implicit_ql(d, e, v, true);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = d[src];
    std::size_t big = 0;
    for (std::size_t r = 1; r < n; ++r)
      if (std::abs(v(r, src)) > std::abs(v(big, src))) big = r;
    const double sign = v(big, src) < 0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = sign * v(r, src);
  }
  return out;
}

std::vector<double> sym_eigenvalues_desc(const Matrix& s) {
  Matrix v = symmetrized(s);
  const std::size_t n = v.rows();
  if (n == 1) return {v(0, 0)};
  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e);
  implicit_ql(d, e, v, false);
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

}  // namespace graphdim
