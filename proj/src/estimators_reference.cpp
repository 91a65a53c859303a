// Serial baseline: one knn query, one chart and one independent fit per
// candidate dimension. No factorization is shared between models.

#include <cmath>

#include "graphdim/error.hpp"
#include "graphdim/estimators.hpp"

namespace graphdim::reference {

namespace {

std::size_t candidate_count(const LocalChart& chart, const EstimatorConfig& cfg) {
  return pmax(chart.dim(), nonconstant_index(chart, cfg.rel_tol), chart.samples() - 1);
}

}  // namespace

LocalEstimate qe_local(const LocalChart& chart, const EstimatorConfig& cfg) {
  const std::size_t count = candidate_count(chart, cfg);
  if (count == 0) return LocalEstimate{chart.center_index, 0, 0.0, true, true};
  std::vector<QuadraticFit> fits;
  for (std::size_t j = 1; j <= count; ++j) fits.push_back(ols_quadratic(chart, j));
  auto est = select_qe(fits, cfg.alpha);
  est.center_index = chart.center_index;
  return est;
}

LocalEstimate tls_local(const LocalChart& chart, const EstimatorConfig& cfg) {
  const std::size_t count = candidate_count(chart, cfg);
  if (count < 2) return LocalEstimate{chart.center_index, 0, 0.0, true, true};
  std::vector<double> sigmas;
  for (std::size_t j = 1; j <= count; ++j) sigmas.push_back(tls_quadratic(chart, j).sigma);
  return LocalEstimate{chart.center_index, select_tls(sigmas), 1.0, true, false};
}

std::vector<LocalEstimate> local_estimates(const PointCloud& cloud, Method method,
                                           const EstimatorConfig& cfg) {
  cfg.validate();
  if (method == Method::twonn) throw InvalidParameter("twonn has no per-neighborhood estimates");
  std::vector<LocalEstimate> out;
  out.reserve(cloud.size());
  for (std::size_t c = 0; c < cloud.size(); ++c) {
    try {
      const auto chart = local_chart(cloud, c, cfg.k);
      if (method == Method::qe)
        out.push_back(reference::qe_local(chart, cfg));
      else if (method == Method::tls)
        out.push_back(reference::tls_local(chart, cfg));
      else
        out.push_back(local_pca_local(chart, cfg));
    } catch (const DegenerateNeighborhood&) {
      out.push_back(LocalEstimate{c, 0, 0.0, false, false});
    }
  }
  return out;
}

GlobalEstimate estimate(const PointCloud& cloud, Method method, const EstimatorConfig& cfg) {
  if (method == Method::twonn) {
    std::vector<double> mu;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto nb = knn(cloud, i, 2);
      const double r1 = std::sqrt(squared_distance(cloud.point(i), cloud.point(nb[0])));
      const double r2 = std::sqrt(squared_distance(cloud.point(i), cloud.point(nb[1])));
      if (r1 > 0.0) mu.push_back(r2 / r1);
    }
    return twonn_from_ratios(mu, cfg.twonn_trim);
  }
  const auto locals = local_estimates(cloud, method, cfg);
  return method == Method::qe ? aggregate_weighted(locals) : aggregate_mean(locals);
}

}  // namespace graphdim::reference
