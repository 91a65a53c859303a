#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphdim/neighborhood.hpp"
#include "graphdim/regression.hpp"

namespace graphdim {

enum class Method { qe, tls, local_pca, twonn };

std::string_view method_name(Method m);
/// Accepts "qe", "tls", "local-pca" / "local_pca", "twonn". Throws InvalidParameter.
Method parse_method(std::string_view name);

struct EstimatorConfig {
  std::size_t k = 20;
  double alpha = 0.01;
  double rel_tol = 1e-8;
  double pca_alpha = 0.05;
  double twonn_trim = 0.1;

  /// Throws InvalidParameter if any field is outside its domain.
  void validate() const;
};

/// Number of candidate dimensions fitted in one neighborhood:
/// min{p - 1, q - 1, m*}, m* the largest m with q_m + 1 <= K. Model j
/// regresses coordinate j+1, which must be one of the q non-constant
/// coordinates, and must keep a residual degree of freedom. 0 means skip.
std::size_t pmax(std::size_t p, std::size_t q, std::size_t k);

struct LocalEstimate {
  std::size_t center_index = 0;
  std::size_t d = 0;
  double weight = 0.0;
  bool valid = false;    // false: degenerate neighborhood
  bool skipped = false;  // true: too few candidate dimensions to fit
};

struct GlobalEstimate {
  double d_hat = 0.0;
  long d_rounded = 0;
  std::size_t n_local = 0;
  std::size_t n_weighted = 0;
};

// ---- per-neighborhood selection rules --------------------------------------

/// Smallest j with adj_r2_j > 0 and p_i < alpha for every i >= j, weighted
/// by adj_r2_j; otherwise (fits.size() + 1, weight 0).
LocalEstimate select_qe(std::span<const QuadraticFit> fits, double alpha);

/// argmax over j = 2..m of eta_j, smallest j on ties. Needs >= 2 sigmas.
std::size_t select_tls(std::span<const double> sigmas);

LocalEstimate qe_local(const LocalChart& chart, const EstimatorConfig& cfg);
LocalEstimate tls_local(const LocalChart& chart, const EstimatorConfig& cfg);
LocalEstimate local_pca_local(const LocalChart& chart, const EstimatorConfig& cfg);

// ---- aggregation ------------------------------------------------------------

/// Weighted mean by w*_k when any weight is positive, else the plain mean of
/// d_k. Invalid and skipped entries are ignored. Sums run in index order.
/// Throws EstimationFailed if nothing remains.
GlobalEstimate aggregate_weighted(std::span<const LocalEstimate> locals);
GlobalEstimate aggregate_mean(std::span<const LocalEstimate> locals);

/// TwoNN maximum likelihood from the ratios r2/r1. Non-finite ratios are
/// dropped; the largest floor(trim * m) are treated as censored at the
/// largest retained ratio, so d = m_kept / (sum log mu_kept + m_cut log mu_max).
GlobalEstimate twonn_from_ratios(std::span<const double> mu, double trim);

// ---- whole-cloud estimators (OpenMP over neighborhoods) --------------------

/// `workers` <= 0 means the default pool size, capped by GRAPHDIM_THREADS.
/// Results are bit-identical for every worker count.
std::vector<LocalEstimate> local_estimates(const PointCloud& cloud, const NeighborGraph& graph,
                                           Method method, const EstimatorConfig& cfg,
                                           int workers = 0);

GlobalEstimate estimate(const PointCloud& cloud, const NeighborGraph& graph, Method method,
                        const EstimatorConfig& cfg, int workers = 0);
GlobalEstimate estimate(const PointCloud& cloud, Method method, const EstimatorConfig& cfg,
                        int workers = 0);

GlobalEstimate qe_estimate(const PointCloud& cloud, const EstimatorConfig& cfg, int workers = 0);
GlobalEstimate tls_estimate(const PointCloud& cloud, const EstimatorConfig& cfg, int workers = 0);
GlobalEstimate local_pca_estimate(const PointCloud& cloud, const EstimatorConfig& cfg,
                                  int workers = 0);
GlobalEstimate twonn_estimate(const PointCloud& cloud, const EstimatorConfig& cfg,
                              int workers = 0);

namespace reference {

// Serial, one-fit-at-a-time versions of the above. Kept as the baseline the
// optimized path is tested and benchmarked against.
LocalEstimate qe_local(const LocalChart& chart, const EstimatorConfig& cfg);
LocalEstimate tls_local(const LocalChart& chart, const EstimatorConfig& cfg);
std::vector<LocalEstimate> local_estimates(const PointCloud& cloud, Method method,
                                           const EstimatorConfig& cfg);
GlobalEstimate estimate(const PointCloud& cloud, Method method, const EstimatorConfig& cfg);

}  // namespace reference

}  // namespace graphdim
