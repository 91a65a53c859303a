#include "graphdim/estimators.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "graphdim/error.hpp"
#include "graphdim/parallel.hpp"

namespace graphdim {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::qe:
      return "qe";
    case Method::tls:
      return "tls";
    case Method::local_pca:
      return "local-pca";
    case Method::twonn:
      return "twonn";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "qe") return Method::qe;
  if (name == "tls") return Method::tls;
  if (name == "local-pca" || name == "local_pca") return Method::local_pca;
  if (name == "twonn") return Method::twonn;
  throw InvalidParameter("unknown method '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
  if (k < 3) throw InvalidParameter("K must be >= 3");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0, 1)");
  if (!(rel_tol > 0.0)) throw InvalidParameter("rel_tol must be positive");
  if (!(pca_alpha > 0.0 && pca_alpha < 1.0)) throw InvalidParameter("pca_alpha must lie in (0, 1)");
  if (!(twonn_trim >= 0.0 && twonn_trim < 0.5)) throw InvalidParameter("twonn_trim must lie in [0, 0.5)");
}

std::size_t pmax(std::size_t p, std::size_t q, std::size_t k) {
  if (p < 2 || q < 2 || k < 3) return 0;
  // largest m with m(m + 3)/2 <= K - 1, i.e. q_m + 1 <= K
  std::size_t m = 0;
  while ((m + 1) * (m + 4) / 2 <= k - 1) ++m;
  return std::min({p - 1, q - 1, m});
}

LocalEstimate select_qe(std::span<const QuadraticFit> fits, double alpha) {
  const std::size_t count = fits.size();
  LocalEstimate est;
  est.valid = true;
  est.d = count + 1;
  est.weight = 0.0;
  // suffix_ok[j] : every p_i < alpha for i >= j (0-based)
  std::vector<bool> suffix_ok(count + 1, true);
  for (std::size_t i = count; i-- > 0;) suffix_ok[i] = suffix_ok[i + 1] && fits[i].p_value < alpha;
  for (std::size_t i = 0; i < count; ++i) {
    if (fits[i].adj_r2 > 0.0 && suffix_ok[i]) {
      est.d = i + 1;
      est.weight = fits[i].adj_r2;
      break;
    }
  }
  return est;
}

std::size_t select_tls(std::span<const double> sigmas) {
  const auto eta = relative_drops(sigmas);
  std::size_t best = 0;
  for (std::size_t i = 1; i < eta.size(); ++i)
    if (eta[i] > eta[best]) best = i;
  return best + 2;  // eta[0] is the drop into j = 2
}

namespace {

LocalEstimate skipped_estimate(std::size_t center) {
  LocalEstimate e;
  e.center_index = center;
  e.valid = true;
  e.skipped = true;
  return e;
}

std::size_t candidate_count(const LocalChart& chart, const EstimatorConfig& cfg) {
  const std::size_t q = nonconstant_index(chart, cfg.rel_tol);
  return pmax(chart.dim(), q, chart.samples() - 1);
}

}  // namespace

LocalEstimate qe_local(const LocalChart& chart, const EstimatorConfig& cfg) {
  const std::size_t count = candidate_count(chart, cfg);
  if (count == 0) return skipped_estimate(chart.center_index);
  const auto fits = ols_ladder(chart, count);
  auto est = select_qe(fits, cfg.alpha);
  est.center_index = chart.center_index;
  return est;
}

LocalEstimate tls_local(const LocalChart& chart, const EstimatorConfig& cfg) {
  const std::size_t count = candidate_count(chart, cfg);
  if (count < 2) return skipped_estimate(chart.center_index);
  const auto fits = tls_ladder(chart, count);
  std::vector<double> sigmas(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) sigmas[i] = fits[i].sigma;
  LocalEstimate est;
  est.center_index = chart.center_index;
  est.valid = true;
  est.d = select_tls(sigmas);
  est.weight = 1.0;
  return est;
}

LocalEstimate local_pca_local(const LocalChart& chart, const EstimatorConfig& cfg) {
  LocalEstimate est;
  est.center_index = chart.center_index;
  est.valid = true;
  est.weight = 1.0;
  const double top = chart.eigenvalues.front();
  est.d = static_cast<std::size_t>(
      std::count_if(chart.eigenvalues.begin(), chart.eigenvalues.end(),
                    [&](double l) { return l >= cfg.pca_alpha * top; }));
  return est;
}

namespace {

GlobalEstimate finish(double d_hat, std::size_t n_local, std::size_t n_weighted) {
  GlobalEstimate g;
  g.d_hat = d_hat;
  g.d_rounded = std::lround(d_hat);
  g.n_local = n_local;
  g.n_weighted = n_weighted;
  return g;
}

bool usable(const LocalEstimate& e) { return e.valid && !e.skipped; }

}  // namespace

GlobalEstimate aggregate_weighted(std::span<const LocalEstimate> locals) {
  double wsum = 0.0, wdsum = 0.0, dsum = 0.0;
  std::size_t n = 0, nw = 0;
  for (const auto& e : locals) {
    if (!usable(e)) continue;
    ++n;
    dsum += static_cast<double>(e.d);
    if (e.weight > 0.0) {
      ++nw;
      wsum += e.weight;
      wdsum += e.weight * static_cast<double>(e.d);
    }
  }
  if (n == 0) throw EstimationFailed("no neighborhood produced a local estimate");
  return finish(wsum > 0.0 ? wdsum / wsum : dsum / static_cast<double>(n), n, nw);
}

GlobalEstimate aggregate_mean(std::span<const LocalEstimate> locals) {
  double dsum = 0.0;
  std::size_t n = 0;
  for (const auto& e : locals) {
    if (!usable(e)) continue;
    ++n;
    dsum += static_cast<double>(e.d);
  }
  if (n == 0) throw EstimationFailed("no neighborhood produced a local estimate");
  return finish(dsum / static_cast<double>(n), n, 0);
}

GlobalEstimate twonn_from_ratios(std::span<const double> mu, double trim) {
  std::vector<double> kept;
  kept.reserve(mu.size());
  for (double m : mu)
    if (std::isfinite(m) && m >= 1.0) kept.push_back(m);
  if (kept.empty()) throw EstimationFailed("twonn: no finite neighbor-distance ratios");
  std::sort(kept.begin(), kept.end());
  const auto discard = static_cast<std::size_t>(std::floor(trim * static_cast<double>(kept.size())));
  if (discard >= kept.size()) throw EstimationFailed("twonn: trimming leaves no ratios");
  kept.resize(kept.size() - discard);
  double log_sum = 0.0;
  for (double m : kept) log_sum += std::log(m);
  // The discarded ratios are right-censored at the largest retained one.
  log_sum += static_cast<double>(discard) * std::log(kept.back());
  if (!(log_sum > 0.0))
    throw EstimationFailed("twonn: every retained ratio equals 1");
  return finish(static_cast<double>(kept.size()) / log_sum, kept.size(), 0);
}

std::vector<LocalEstimate> local_estimates(const PointCloud& cloud, const NeighborGraph& graph,
                                           Method method, const EstimatorConfig& cfg, int workers) {
  cfg.validate();
  if (method == Method::twonn) throw InvalidParameter("twonn has no per-neighborhood estimates");
  if (graph.size() != cloud.size()) throw InvalidParameter("neighbor graph does not match the cloud");
  if (cfg.k >= cloud.size())
    throw InvalidParameter("K = " + std::to_string(cfg.k) + " needs more than " +
                           std::to_string(cloud.size()) + " points");
  const long n = static_cast<long>(cloud.size());
  std::vector<LocalEstimate> out(cloud.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_workers(workers))
  for (long i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(i);
    try {
      const auto chart = local_chart(cloud, c, graph.neighbors(c, cfg.k));
      switch (method) {
        case Method::qe:
          out[c] = qe_local(chart, cfg);
          break;
        case Method::tls:
          out[c] = tls_local(chart, cfg);
          break;
        default:
          out[c] = local_pca_local(chart, cfg);
          break;
      }
    } catch (const DegenerateNeighborhood&) {
      out[c] = LocalEstimate{c, 0, 0.0, false, false};
    } catch (...) {
#pragma omp critical(graphdim_local_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

GlobalEstimate twonn_with_graph(const PointCloud& cloud, const NeighborGraph& graph,
                                const EstimatorConfig& cfg) {
  if (cloud.size() < 3) throw InvalidParameter("twonn needs at least 3 points");
  if (!(cfg.twonn_trim >= 0.0 && cfg.twonn_trim < 0.5))
    throw InvalidParameter("twonn_trim must lie in [0, 0.5)");
  std::vector<double> mu;
  mu.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto d = graph.distances(i, 2);
    if (d[0] > 0.0) mu.push_back(d[1] / d[0]);
  }
  return twonn_from_ratios(mu, cfg.twonn_trim);
}

}  // namespace

GlobalEstimate estimate(const PointCloud& cloud, const NeighborGraph& graph, Method method,
                        const EstimatorConfig& cfg, int workers) {
  if (method == Method::twonn) return twonn_with_graph(cloud, graph, cfg);
  const auto locals = local_estimates(cloud, graph, method, cfg, workers);
  return method == Method::qe ? aggregate_weighted(locals) : aggregate_mean(locals);
}

GlobalEstimate estimate(const PointCloud& cloud, Method method, const EstimatorConfig& cfg,
                        int workers) {
  const std::size_t k = method == Method::twonn ? 2 : cfg.k;
  if (method != Method::twonn) cfg.validate();
  if (k >= cloud.size())
    throw InvalidParameter("K = " + std::to_string(k) + " needs more than " +
                           std::to_string(cloud.size()) + " points");
  const NeighborGraph graph(cloud, k, workers);
  return estimate(cloud, graph, method, cfg, workers);
}

GlobalEstimate qe_estimate(const PointCloud& cloud, const EstimatorConfig& cfg, int workers) {
  return estimate(cloud, Method::qe, cfg, workers);
}
GlobalEstimate tls_estimate(const PointCloud& cloud, const EstimatorConfig& cfg, int workers) {
  return estimate(cloud, Method::tls, cfg, workers);
}
GlobalEstimate local_pca_estimate(const PointCloud& cloud, const EstimatorConfig& cfg, int workers) {
  return estimate(cloud, Method::local_pca, cfg, workers);
}
GlobalEstimate twonn_estimate(const PointCloud& cloud, const EstimatorConfig& cfg, int workers) {
  return estimate(cloud, Method::twonn, cfg, workers);
}

}  // namespace graphdim
