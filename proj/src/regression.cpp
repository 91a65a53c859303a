#include "graphdim/regression.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "graphdim/error.hpp"
#include "graphdim/numerics.hpp"

namespace graphdim {

std::vector<double> quadratic_features(std::span<const double> x) {
  const std::size_t j = x.size();
  std::vector<double> out;
  out.reserve(quadratic_term_count(j));
  for (double v : x) out.push_back(v);
  for (double v : x) out.push_back(v * v);
  for (std::size_t a = 0; a < j; ++a)
    for (std::size_t b = a + 1; b < j; ++b) out.push_back(x[a] * x[b]);
  return out;
}

FeatureTerm feature_term(std::size_t j, std::size_t index) {
  if (index < j) return {FeatureTerm::Kind::linear, index, index};
  if (index < 2 * j) return {FeatureTerm::Kind::square, index - j, index - j};
  std::size_t rest = index - 2 * j;
  for (std::size_t a = 0; a < j; ++a) {
    const std::size_t row = j - a - 1;  // pairs (a, b) with b > a
    if (rest < row) return {FeatureTerm::Kind::cross, a, a + 1 + rest};
    rest -= row;
  }
  throw InvalidParameter("feature_term: index out of range");
}

std::size_t feature_index(std::size_t j, FeatureTerm term) {
  switch (term.kind) {
    case FeatureTerm::Kind::linear:
      return term.a;
    case FeatureTerm::Kind::square:
      return j + term.a;
    case FeatureTerm::Kind::cross: {
      std::size_t idx = 2 * j;
      for (std::size_t a = 0; a < term.a; ++a) idx += j - a - 1;
      return idx + (term.b - term.a - 1);
    }
  }
  return 0;
}

QuadraticFit summarize_ols(std::size_t j, std::size_t n, double rss, double tss, bool vacuous) {
  QuadraticFit fit;
  fit.j = j;
  fit.predictors = quadratic_term_count(j);
  fit.n_samples = n;
  fit.rss = rss;
  fit.tss = tss;
  if (vacuous || !(tss > 0.0)) {
    fit.vacuous = true;
    fit.r2 = 0.0;
    fit.adj_r2 = 0.0;
    fit.f_stat = 0.0;
    fit.p_value = 1.0;
    return fit;
  }
  const double q = static_cast<double>(fit.predictors);
  const double dof = static_cast<double>(n) - q - 1.0;
  fit.rss = std::min(std::max(rss, 0.0), tss);
  fit.r2 = 1.0 - fit.rss / tss;
  fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (static_cast<double>(n) - 1.0) / dof;
  if (fit.rss == 0.0) {
    fit.f_stat = std::numeric_limits<double>::infinity();
    fit.p_value = 0.0;
  } else {
    fit.f_stat = ((tss - fit.rss) / q) / (fit.rss / dof);
    fit.p_value = f_survival(fit.f_stat, q, dof);
  }
  return fit;
}

namespace {

void check_model(const LocalChart& chart, std::size_t j) {
  if (j < 1) throw InvalidParameter("quadratic fit: j must be >= 1");
  if (j + 1 > chart.dim())
    throw InvalidParameter("quadratic fit: chart has no coordinate " + std::to_string(j + 1));
  if (chart.samples() < quadratic_term_count(j) + 2)
    throw InvalidParameter("quadratic fit: " + std::to_string(chart.samples()) +
                           " samples leave no residual degree of freedom for j = " +
                           std::to_string(j));
}

// Response spread below this fraction of the chart's overall spread counts as
// constant.
constexpr double kFlatResponse = 1e-12;

double chart_scatter(const LocalChart& chart) {
  double s = 0.0;
  for (double v : chart.coords.data()) s += v * v;
  return s;
}

bool response_is_flat(double tss, double scatter) {
  return !(tss > kFlatResponse * kFlatResponse * scatter);
}

}  // namespace

QuadraticFit ols_quadratic(const LocalChart& chart, std::size_t j) {
  check_model(chart, j);
  const std::size_t n = chart.samples();
  const std::size_t q = quadratic_term_count(j);

  Matrix design(n, q + 1);
  std::vector<double> y(n);
  double y_mean = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = chart.coords.row(r);
    const auto feats = quadratic_features(row.first(j));
    design(r, 0) = 1.0;
    for (std::size_t c = 0; c < q; ++c) design(r, c + 1) = feats[c];
    y[r] = row[j];
    y_mean += y[r];
  }
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (double v : y) tss += (v - y_mean) * (v - y_mean);
  if (response_is_flat(tss, chart_scatter(chart))) return summarize_ols(j, n, 0.0, tss, true);

  const auto sol = least_squares_solve(design, y);
  double rss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double pred = 0.0;
    for (std::size_t c = 0; c <= q; ++c) pred += design(r, c) * sol.coef[c];
    rss += (y[r] - pred) * (y[r] - pred);
  }
  return summarize_ols(j, n, rss, tss, false);
}

TlsFit tls_quadratic(const LocalChart& chart, std::size_t j) {
  check_model(chart, j);
  const std::size_t n = chart.samples();
  const std::size_t q = quadratic_term_count(j);
  Matrix aug(n, q + 1);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = chart.coords.row(r);
    const auto feats = quadratic_features(row.first(j));
    for (std::size_t c = 0; c < q; ++c) aug(r, c) = feats[c];
    aug(r, q) = row[j];
  }
  for (std::size_t c = 0; c <= q; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += aug(r, c);
    mean /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) aug(r, c) -= mean;
  }
  const double s = smallest_singular_value(aug);
  return {j, s * s};
}

std::vector<double> relative_drops(std::span<const double> sigmas) {
  if (sigmas.size() < 2) throw InvalidParameter("relative_drops: need at least two errors");
  std::vector<double> eta(sigmas.size() - 1);
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i)
    eta[i] = sigmas[i] == 0.0 ? 0.0 : (sigmas[i] - sigmas[i + 1]) / sigmas[i];
  return eta;
}

namespace {

// Columns grouped by highest input index; see the header. `with_intercept`
// prepends a column of ones.
Matrix ladder_matrix(const LocalChart& chart, std::size_t max_j, bool with_intercept) {
  const std::size_t n = chart.samples();
  const std::size_t offset = with_intercept ? 1 : 0;
  const std::size_t cols = quadratic_term_count(max_j) + 1 + offset;
  Matrix m(n, cols);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = chart.coords.row(r);
    std::size_t c = 0;
    if (with_intercept) m(r, c++) = 1.0;
    for (std::size_t i = 0; i < max_j; ++i) {
      m(r, c++) = x[i];
      m(r, c++) = x[i] * x[i];
      for (std::size_t a = 0; a < i; ++a) m(r, c++) = x[a] * x[i];
    }
    m(r, c) = x[max_j];
  }
  return m;
}

void check_ladder(const LocalChart& chart, std::size_t max_j) {
  if (max_j < 1) throw InvalidParameter("ladder: max_j must be >= 1");
  check_model(chart, max_j);
}

}  // namespace

std::vector<QuadraticFit> ols_ladder(const LocalChart& chart, std::size_t max_j) {
  check_ladder(chart, max_j);
  const std::size_t n = chart.samples();
  Matrix a = ladder_matrix(chart, max_j, true);
  const std::size_t cols = a.cols();
  std::vector<double> col_norm(cols, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < cols; ++c) col_norm[c] += a(r, c) * a(r, c);
  for (double& v : col_norm) v = std::sqrt(v);
  householder_triangularize(a);

  const double scatter = chart_scatter(chart);
  std::vector<QuadraticFit> fits;
  fits.reserve(max_j);
  std::size_t next_design_col = 0;  // design columns [0, checked) are verified well conditioned
  bool deficient = false;
  for (std::size_t j = 1; j <= max_j; ++j) {
    const std::size_t c = quadratic_term_count(j) + 1;  // response column x_{j+1}
    for (; !deficient && next_design_col < c; ++next_design_col) {
      const std::size_t d = next_design_col;
      // |R_dd| / |a_d| is the sine of the angle between column d and the span
      // of the columns before it.
      if (!(std::abs(a(d, d)) > 1e-8 * col_norm[d])) deficient = true;
    }
    if (deficient) {
      fits.push_back(ols_quadratic(chart, j));
      continue;
    }
    double tss = 0.0;
    for (std::size_t i = 1; i <= c; ++i) tss += a(i, c) * a(i, c);
    const double rss = a(c, c) * a(c, c);
    fits.push_back(summarize_ols(j, n, rss, tss, response_is_flat(tss, scatter)));
  }
  return fits;
}

std::vector<TlsFit> tls_ladder(const LocalChart& chart, std::size_t max_j) {
  check_ladder(chart, max_j);
  const std::size_t n = chart.samples();
  Matrix a = ladder_matrix(chart, max_j, false);
  const std::size_t cols = a.cols();
  for (std::size_t c = 0; c < cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += a(r, c);
    mean /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) a(r, c) -= mean;
  }
  householder_triangularize(a);

  std::vector<TlsFit> fits;
  fits.reserve(max_j);
  for (std::size_t j = 1; j <= max_j; ++j) {
    const std::size_t size = quadratic_term_count(j) + 1;
    Matrix block(size, size);
    for (std::size_t r = 0; r < size; ++r)
      for (std::size_t c = r; c < size; ++c) block(r, c) = a(r, c);
    const double s = smallest_singular_value(block);
    fits.push_back({j, s * s});
  }
  return fits;
}

}  // namespace graphdim
