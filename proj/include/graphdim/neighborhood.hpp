#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphdim/matrix.hpp"

namespace graphdim {

/// n samples in R^p, one per row.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws InvalidInput unless n >= 2, p >= 2 and every coordinate is finite.
  explicit PointCloud(Matrix points);

  std::size_t size() const { return points_.rows(); }
  std::size_t dim() const { return points_.cols(); }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }
  const Matrix& points() const { return points_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  Matrix points_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Indices of the K nearest points to `center` (itself excluded), ascending
/// by Euclidean distance, ties broken by ascending index. Brute force.
/// Throws InvalidParameter unless 1 <= K <= n - 1.
std::vector<std::size_t> knn(const PointCloud& cloud, std::size_t center, std::size_t k);

/// k-NN lists for every point, computed once for the largest K of interest;
/// any smaller K reads a prefix of each list.
class NeighborGraph {
 public:
  NeighborGraph() = default;
  NeighborGraph(const PointCloud& cloud, std::size_t k_max, int workers = 0);

  std::size_t size() const { return n_; }
  std::size_t k_max() const { return k_max_; }
  std::span<const std::size_t> neighbors(std::size_t i, std::size_t k) const;
  std::span<const double> distances(std::size_t i, std::size_t k) const;

 private:
  std::size_t n_ = 0;
  std::size_t k_max_ = 0;
  std::vector<std::size_t> index_;
  std::vector<double> dist_;
};

/// One neighborhood (center plus K neighbors) expressed in its PCA frame.
struct LocalChart {
  std::size_t center_index = 0;
  std::vector<std::size_t> neighbor_indices;
  std::vector<double> mean;
  Matrix basis;                  // p x p, column i is the i-th principal direction
  std::vector<double> eigenvalues;  // non-increasing
  Matrix coords;                 // (K + 1) x p; row 0 is the center

  std::size_t samples() const { return coords.rows(); }
  std::size_t dim() const { return coords.cols(); }
};

/// Sample covariance (divisor K) of the center and its neighbors,
/// eigendecomposed, with every point re-expressed as V^T (x - mean).
/// Throws DegenerateNeighborhood if all K + 1 points coincide.
LocalChart local_chart(const PointCloud& cloud, std::size_t center, std::size_t k);
LocalChart local_chart(const PointCloud& cloud, std::size_t center,
                       std::span<const std::size_t> neighbors);

/// Largest 1-based column index whose standard deviation exceeds
/// rel_tol times that of the first column; 0 if the first column is flat.
std::size_t nonconstant_index(const LocalChart& chart, double rel_tol = 1e-8);

}  // namespace graphdim
