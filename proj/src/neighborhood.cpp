#include "graphdim/neighborhood.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "graphdim/error.hpp"
#include "graphdim/numerics.hpp"
#include "graphdim/parallel.hpp"

namespace graphdim {

PointCloud::PointCloud(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 2 || points_.cols() < 2)
    throw InvalidInput("PointCloud: need at least 2 points in at least 2 dimensions");
  if (!points_.all_finite()) throw InvalidInput("PointCloud: non-finite coordinate");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

namespace {

using Candidate = std::pair<double, std::size_t>;  // (squared distance, index)

// Writes the k nearest (distance, index) pairs of `center` into out[0..k).
void nearest_into(const PointCloud& cloud, std::size_t center, std::size_t k,
                  std::vector<Candidate>& scratch) {
  const std::size_t n = cloud.size();
  scratch.clear();
  scratch.reserve(n - 1);
  const auto c = cloud.point(center);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == center) continue;
    scratch.emplace_back(squared_distance(c, cloud.point(i)), i);
  }
  // pair ordering compares distance, then index: the tie-break rule.
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
}

void check_k(const PointCloud& cloud, std::size_t center, std::size_t k) {
  if (center >= cloud.size()) throw InvalidParameter("knn: center index out of range");
  if (k < 1 || k >= cloud.size())
    throw InvalidParameter("knn: K must satisfy 1 <= K <= n - 1 (K = " + std::to_string(k) +
                           ", n = " + std::to_string(cloud.size()) + ")");
}

}  // namespace

std::vector<std::size_t> knn(const PointCloud& cloud, std::size_t center, std::size_t k) {
  check_k(cloud, center, k);
  std::vector<Candidate> scratch;
  nearest_into(cloud, center, k, scratch);
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = scratch[i].second;
  return out;
}

NeighborGraph::NeighborGraph(const PointCloud& cloud, std::size_t k_max, int workers)
    : n_(cloud.size()), k_max_(k_max), index_(cloud.size() * k_max), dist_(cloud.size() * k_max) {
  check_k(cloud, 0, k_max);
  const long n = static_cast<long>(n_);
#pragma omp parallel num_threads(resolve_workers(workers))
  {
    std::vector<Candidate> scratch;
#pragma omp for schedule(static)
    for (long i = 0; i < n; ++i) {
      const std::size_t c = static_cast<std::size_t>(i);
      nearest_into(cloud, c, k_max_, scratch);
      for (std::size_t j = 0; j < k_max_; ++j) {
        index_[c * k_max_ + j] = scratch[j].second;
        dist_[c * k_max_ + j] = std::sqrt(scratch[j].first);
      }
    }
  }
}

std::span<const std::size_t> NeighborGraph::neighbors(std::size_t i, std::size_t k) const {
  if (k > k_max_) throw InvalidParameter("NeighborGraph: K exceeds the precomputed maximum");
  return {index_.data() + i * k_max_, k};
}

std::span<const double> NeighborGraph::distances(std::size_t i, std::size_t k) const {
  if (k > k_max_) throw InvalidParameter("NeighborGraph: K exceeds the precomputed maximum");
  return {dist_.data() + i * k_max_, k};
}

LocalChart local_chart(const PointCloud& cloud, std::size_t center, std::size_t k) {
  const auto nb = knn(cloud, center, k);
  return local_chart(cloud, center, nb);
}

LocalChart local_chart(const PointCloud& cloud, std::size_t center,
                       std::span<const std::size_t> neighbors) {
  const std::size_t p = cloud.dim();
  const std::size_t k = neighbors.size();
  if (k < 1) throw InvalidParameter("local_chart: need at least one neighbor");

  LocalChart chart;
  chart.center_index = center;
  chart.neighbor_indices.assign(neighbors.begin(), neighbors.end());

  Matrix centered(k + 1, p);
  auto row_of = [&](std::size_t r) { return r == 0 ? center : neighbors[r - 1]; };
  chart.mean.assign(p, 0.0);
  for (std::size_t r = 0; r <= k; ++r) {
    const auto x = cloud.point(row_of(r));
    for (std::size_t c = 0; c < p; ++c) chart.mean[c] += x[c];
  }
  for (double& m : chart.mean) m /= static_cast<double>(k + 1);
  for (std::size_t r = 0; r <= k; ++r) {
    const auto x = cloud.point(row_of(r));
    for (std::size_t c = 0; c < p; ++c) centered(r, c) = x[c] - chart.mean[c];
  }

  Matrix cov(p, p);
  for (std::size_t r = 0; r <= k; ++r) {
    const auto x = centered.row(r);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) cov(a, b) += x[a] * x[b];
  }
  double trace = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      cov(a, b) /= static_cast<double>(k);
      cov(b, a) = cov(a, b);
    }
    trace += cov(a, a);
  }
  if (!(trace > 0.0))
    throw DegenerateNeighborhood("local_chart: all points of neighborhood " +
                                 std::to_string(center) + " coincide");

  auto eig = sym_eigen_desc(cov);
  chart.eigenvalues = std::move(eig.values);
  chart.basis = std::move(eig.vectors);

  chart.coords = Matrix(k + 1, p);
  for (std::size_t r = 0; r <= k; ++r) {
    const auto x = centered.row(r);
    auto out = chart.coords.row(r);
    for (std::size_t a = 0; a < p; ++a) {
      const double xa = x[a];
      if (xa == 0.0) continue;
      for (std::size_t c = 0; c < p; ++c) out[c] += xa * chart.basis(a, c);
    }
  }
  return chart;
}

std::size_t nonconstant_index(const LocalChart& chart, double rel_tol) {
  const std::size_t rows = chart.coords.rows();
  const std::size_t p = chart.coords.cols();
  if (rows == 0 || p == 0) return 0;
  std::vector<double> sd(p, 0.0);
  for (std::size_t c = 0; c < p; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += chart.coords(r, c);
    mean /= static_cast<double>(rows);
    double ss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double t = chart.coords(r, c) - mean;
      ss += t * t;
    }
    sd[c] = std::sqrt(ss / static_cast<double>(rows));
  }
  if (!(sd[0] > 0.0)) return 0;
  std::size_t q = 0;
  for (std::size_t c = 0; c < p; ++c)
    if (sd[c] > rel_tol * sd[0]) q = c + 1;
  return q;
}

}  // namespace graphdim
