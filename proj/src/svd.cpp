// Singular values by Golub-Kahan bidiagonalization and the implicit-shift QR
// sweep of LINPACK dsvdc, with singular-vector accumulation removed.

#include <algorithm>
#include <cmath>

#include "graphdim/error.hpp"
#include "graphdim/numerics.hpp"

namespace graphdim {

std::vector<double> singular_values(const Matrix& input) {
  const std::size_t m = input.rows();
  const std::size_t n = input.cols();
  if (n == 0 || m < n) throw InvalidInput("singular_values: need rows >= cols >= 1");
  if (!input.all_finite()) throw InvalidInput("singular_values: non-finite entry");

  Matrix a = input;
  std::vector<double> s(std::min(m + 1, n), 0.0);
  std::vector<double> e(n, 0.0);
  std::vector<double> work(m, 0.0);

  const std::size_t nct = std::min(m - 1, n);
  const std::size_t nrt = n >= 2 ? std::min(n - 2, m) : 0;
  for (std::size_t k = 0; k < std::max(nct, nrt); ++k) {
    if (k < nct) {
      s[k] = 0.0;
      for (std::size_t i = k; i < m; ++i) s[k] = std::hypot(s[k], a(i, k));
      if (s[k] != 0.0) {
        if (a(k, k) < 0.0) s[k] = -s[k];
        for (std::size_t i = k; i < m; ++i) a(i, k) /= s[k];
        a(k, k) += 1.0;
      }
      s[k] = -s[k];
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (k < nct && s[k] != 0.0) {
        double t = 0.0;
        for (std::size_t i = k; i < m; ++i) t += a(i, k) * a(i, j);
        t = -t / a(k, k);
        for (std::size_t i = k; i < m; ++i) a(i, j) += t * a(i, k);
      }
      e[j] = a(k, j);
    }
    if (k < nrt) {
      e[k] = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) e[k] = std::hypot(e[k], e[i]);
      if (e[k] != 0.0) {
        if (e[k + 1] < 0.0) e[k] = -e[k];
        for (std::size_t i = k + 1; i < n; ++i) e[i] /= e[k];
        e[k + 1] += 1.0;
      }
      e[k] = -e[k];
      if (k + 1 < m && e[k] != 0.0) {
        for (std::size_t i = k + 1; i < m; ++i) work[i] = 0.0;
        for (std::size_t j = k + 1; j < n; ++j)
          for (std::size_t i = k + 1; i < m; ++i) work[i] += e[j] * a(i, j);
        for (std::size_t j = k + 1; j < n; ++j) {
          const double t = -e[j] / e[k + 1];
          for (std::size_t i = k + 1; i < m; ++i) a(i, j) += t * work[i];
        }
      }
    }
  }

  // Final bidiagonal of order p.
  std::size_t p = std::min(n, m + 1);
  if (nct < n) s[nct] = a(nct, nct);
  if (m < p) s[p - 1] = 0.0;
  if (nrt + 1 < p) e[nrt] = a(nrt, p - 1);
  e[p - 1] = 0.0;

  const double eps = 0x1p-52;
  const double tiny = 0x1p-966;
  const std::size_t pp = p - 1;
  int iter = 0;
  while (p > 0) {
    if (iter > 75 * static_cast<int>(n)) throw InvalidInput("singular_values: no convergence");
    // Signed indices: k == -1 marks "no negligible superdiagonal found".
    long k;
    int kase;
    const long pl = static_cast<long>(p);
    for (k = pl - 2; k >= -1; --k) {
      if (k == -1) break;
      if (std::abs(e[k]) <= tiny + eps * (std::abs(s[k]) + std::abs(s[k + 1]))) {
        e[k] = 0.0;
        break;
      }
    }
    if (k == pl - 2) {
      kase = 4;
    } else {
      long ks;
      for (ks = pl - 1; ks >= k; --ks) {
        if (ks == k) break;
        const double t = (ks != pl ? std::abs(e[ks]) : 0.0) + (ks != k + 1 ? std::abs(e[ks - 1]) : 0.0);
        if (std::abs(s[ks]) <= tiny + eps * t) {
          s[ks] = 0.0;
          break;
        }
      }
      if (ks == k) {
        kase = 3;
      } else if (ks == pl - 1) {
        kase = 1;
      } else {
        kase = 2;
        k = ks;
      }
    }
    ++k;

    switch (kase) {
      case 1: {  // deflate negligible s(p)
        double f = e[p - 2];
        e[p - 2] = 0.0;
        for (long j = pl - 2; j >= k; --j) {
          const double t = std::hypot(s[j], f);
          const double cs = s[j] / t;
          const double sn = f / t;
          s[j] = t;
          if (j != k) {
            f = -sn * e[j - 1];
            e[j - 1] = cs * e[j - 1];
          }
        }
      } break;
      case 2: {  // split at negligible s(k)
        double f = e[k - 1];
        e[k - 1] = 0.0;
        for (long j = k; j < pl; ++j) {
          const double t = std::hypot(s[j], f);
          const double cs = s[j] / t;
          const double sn = f / t;
          s[j] = t;
          f = -sn * e[j];
          e[j] = cs * e[j];
        }
      } break;
      case 3: {  // one QR step
        const double scale =
            std::max({std::abs(s[p - 1]), std::abs(s[p - 2]), std::abs(e[p - 2]), std::abs(s[k]),
                      std::abs(e[k])});
        const double sp = s[p - 1] / scale;
        const double spm1 = s[p - 2] / scale;
        const double epm1 = e[p - 2] / scale;
        const double sk = s[k] / scale;
        const double ek = e[k] / scale;
        const double b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
        const double c = (sp * epm1) * (sp * epm1);
        double shift = 0.0;
        if (b != 0.0 || c != 0.0) {
          shift = std::sqrt(b * b + c);
          if (b < 0.0) shift = -shift;
          shift = c / (b + shift);
        }
        double f = (sk + sp) * (sk - sp) + shift;
        double g = sk * ek;
        for (long j = k; j < pl - 1; ++j) {
          double t = std::hypot(f, g);
          double cs = f / t;
          double sn = g / t;
          if (j != k) e[j - 1] = t;
          f = cs * s[j] + sn * e[j];
          e[j] = cs * e[j] - sn * s[j];
          g = sn * s[j + 1];
          s[j + 1] = cs * s[j + 1];
          t = std::hypot(f, g);
          cs = f / t;
          sn = g / t;
          s[j] = t;
          f = cs * e[j] + sn * s[j + 1];
          s[j + 1] = -sn * e[j] + cs * s[j + 1];
          g = sn * e[j + 1];
          e[j + 1] = cs * e[j + 1];
        }
        e[p - 2] = f;
        ++iter;
      } break;
      case 4: {  // convergence
        if (s[k] <= 0.0) s[k] = (s[k] < 0.0 ? -s[k] : 0.0);
        while (k < static_cast<long>(pp)) {
          if (s[k] >= s[k + 1]) break;
          std::swap(s[k], s[k + 1]);
          ++k;
        }
        iter = 0;
        --p;
      } break;
    }
  }
  s.resize(n);
  return s;
}

double smallest_singular_value(const Matrix& a) {
  const auto s = singular_values(a);
  return s.back();
}

}  // namespace graphdim
