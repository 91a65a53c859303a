#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphdim/neighborhood.hpp"

namespace graphdim {

/// Predictor count of the full quadratic model in j inputs: j(j-1)/2 + 2j.
constexpr std::size_t quadratic_term_count(std::size_t j) { return j * (j - 1) / 2 + 2 * j; }

/// Linear terms, then squares, then cross products x_a x_b (a < b,
/// lexicographic). Length quadratic_term_count(x.size()).
std::vector<double> quadratic_features(std::span<const double> x);

/// Decoded meaning of one entry of quadratic_features.
struct FeatureTerm {
  enum class Kind { linear, square, cross };
  Kind kind;
  std::size_t a;  // 0-based input index
  std::size_t b;  // equals a for linear and square terms
};
FeatureTerm feature_term(std::size_t j, std::size_t index);
std::size_t feature_index(std::size_t j, FeatureTerm term);

/// Ordinary least-squares fit of coordinate j+1 on an intercept plus the
/// quadratic features of coordinates 1..j.
struct QuadraticFit {
  std::size_t j = 0;
  std::size_t predictors = 0;  // q_j
  std::size_t n_samples = 0;
  double rss = 0.0;
  double tss = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f_stat = 0.0;
  double p_value = 1.0;
  bool vacuous = false;  // constant response: r2 = adj_r2 = 0, p = 1
};

/// Total least-squares error: squared smallest singular value of the
/// column-centered [features | response] matrix.
struct TlsFit {
  std::size_t j = 0;
  double sigma = 0.0;
};

/// Fills r2/adj_r2/F/p from (n, q, rss, tss), applying the constant-response
/// convention when `vacuous` is set.
QuadraticFit summarize_ols(std::size_t j, std::size_t n, double rss, double tss, bool vacuous);

/// Reference OLS fit through least_squares_solve. Throws InvalidParameter when
/// the chart lacks coordinate j+1 or has fewer than q_j + 2 samples.
QuadraticFit ols_quadratic(const LocalChart& chart, std::size_t j);

/// Reference TLS fit through smallest_singular_value. Same preconditions.
TlsFit tls_quadratic(const LocalChart& chart, std::size_t j);

/// eta_{j+1} = (sigma_j - sigma_{j+1}) / sigma_j, 0 where sigma_j = 0.
/// Output has sigmas.size() - 1 entries; throws InvalidParameter for fewer
/// than two sigmas.
std::vector<double> relative_drops(std::span<const double> sigmas);

/// All fits j = 1..max_j for one chart from a single factorization.
///
/// Columns are laid out grouped by the highest input index they involve
/// (x_i, x_i^2, x_1 x_i, ..., x_{i-1} x_i), so the predictors of model j
/// are exactly the first q_j columns and column q_j is x_{j+1}. One
/// Householder R of the full layout then yields every nested model: the OLS
/// residual of model j is R[c][c]^2 at the response column, and the TLS
/// error is the smallest singular value of the leading (q_j + 1) block.
/// Results agree with ols_quadratic / tls_quadratic to rounding; when a
/// nested design is numerically rank deficient the OLS fits from that j on
/// are recomputed through ols_quadratic.
std::vector<QuadraticFit> ols_ladder(const LocalChart& chart, std::size_t max_j);
std::vector<TlsFit> tls_ladder(const LocalChart& chart, std::size_t max_j);

}  // namespace graphdim
