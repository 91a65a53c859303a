#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "graphdim/error.hpp"
#include "graphdim/manifolds.hpp"
#include "graphdim/neighborhood.hpp"
#include "graphdim/numerics.hpp"
#include "test_support.hpp"

using namespace graphdim;

namespace {

PointCloud random_cloud(std::size_t n, std::size_t p, std::uint64_t seed) {
  return PointCloud(testsupport::gaussian_matrix(n, p, seed));
}

// Full sort of (distance, index) pairs, the brute-force oracle for knn.
std::vector<std::size_t> sorted_neighbors(const PointCloud& c, std::size_t center, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != center) all.emplace_back(squared_distance(c.point(i), c.point(center)), i);
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
  return out;
}

double column_std(const Matrix& m, std::size_t c) {
  double mean = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) mean += m(r, c);
  mean /= static_cast<double>(m.rows());
  double ss = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) ss += (m(r, c) - mean) * (m(r, c) - mean);
  return std::sqrt(ss / static_cast<double>(m.rows()));
}

LocalChart chart_with_coords(Matrix coords) {
  LocalChart ch;
  ch.coords = std::move(coords);
  return ch;
}

}  // namespace

TEST_CASE("point cloud validation") {
  CHECK_THROWS_AS(PointCloud(Matrix(1, 3)), InvalidInput);
  CHECK_THROWS_AS(PointCloud(Matrix(4, 1)), InvalidInput);
  Matrix m(3, 2, 1.0);
  m(2, 1) = std::nan("");
  CHECK_THROWS_AS(PointCloud{m}, InvalidInput);
  CHECK_NOTHROW(PointCloud(Matrix(2, 2)));
}

TEST_CASE("knn on a line orders by distance") {
  const PointCloud c(Matrix::from_rows({{0, 0}, {1, 0}, {3, 0}, {10, 0}}));
  CHECK(knn(c, 0, 2) == std::vector<std::size_t>{1, 2});
  CHECK(knn(c, 0, 3) == std::vector<std::size_t>{1, 2, 3});
  CHECK(knn(c, 3, 1) == std::vector<std::size_t>{2});
}

TEST_CASE("knn ties break by index") {
  const PointCloud c(Matrix::from_rows({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
  CHECK(knn(c, 0, 4) == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(knn(c, 0, 2) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("knn parameter checks") {
  const auto c = random_cloud(10, 3, 1);
  CHECK_THROWS_AS(knn(c, 0, 0), InvalidParameter);
  CHECK_THROWS_AS(knn(c, 0, 10), InvalidParameter);
  CHECK_THROWS_AS(knn(c, 10, 3), InvalidParameter);
  auto all = knn(c, 4, 9);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 5, 6, 7, 8, 9});
}

TEST_CASE("knn matches the full-sort oracle") {
  const auto c = random_cloud(100, 5, 7);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(knn(c, i, 10) == sorted_neighbors(c, i, 10));
}

TEST_CASE("neighbor graph prefixes equal knn for every K up to k_max") {
  const auto c = random_cloud(60, 4, 9);
  for (int w : {1, 3}) {
    const NeighborGraph g(c, 12, w);
    CHECK(g.k_max() == 12);
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t k : {1u, 5u, 12u}) {
        const auto span = g.neighbors(i, k);
        CHECK(std::vector<std::size_t>(span.begin(), span.end()) == knn(c, i, k));
      }
      const auto d = g.distances(i, 12);
      for (std::size_t j = 0; j < 12; ++j)
        CHECK(d[j] == std::sqrt(squared_distance(c.point(i), c.point(g.neighbors(i, 12)[j]))));
    }
    CHECK_THROWS_AS(g.neighbors(0, 13), InvalidParameter);
  }
}

TEST_CASE("knn is consistent under a permutation of storage order") {
  const auto c = random_cloud(50, 3, 21);
  std::vector<std::size_t> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(5);
  for (std::size_t i = 49; i > 0; --i) std::swap(perm[i], perm[rng.next() % (i + 1)]);
  Matrix pm(50, 3);
  for (std::size_t i = 0; i < 50; ++i)
    std::copy(c.point(perm[i]).begin(), c.point(perm[i]).end(), pm.row(i).begin());
  const PointCloud pc(pm);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto a = knn(pc, i, 8);
    std::set<std::size_t> mapped;
    for (auto j : a) mapped.insert(perm[j]);
    const auto b = knn(c, perm[i], 8);
    CHECK(mapped == std::set<std::size_t>(b.begin(), b.end()));
  }
}

TEST_CASE("local chart of collinear points") {
  const double s = 1.0 / std::sqrt(2.0);
  const PointCloud c(Matrix::from_rows({{0, 0}, {s, s}, {2 * s, 2 * s}}));
  const auto ch = local_chart(c, 0, 2);
  CHECK(std::fabs(ch.eigenvalues[1]) < 1e-14);
  CHECK(std::fabs(std::fabs(ch.basis(0, 0)) - s) < 1e-12);
  CHECK(std::fabs(std::fabs(ch.basis(1, 0)) - s) < 1e-12);
  CHECK(ch.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));  // divisor K = 2
}

TEST_CASE("axis-aligned centered data keeps its coordinates up to order and sign") {
  const PointCloud c(Matrix::from_rows({{0, 0, 0}, {3, 0, 0}, {-3, 0, 0}, {0, 1, 0}, {0, -1, 0}}));
  const auto ch = local_chart(c, 0, 4);
  CHECK(ch.neighbor_indices == std::vector<std::size_t>{3, 4, 1, 2});
  for (std::size_t r = 0; r < 5; ++r) {
    const auto pt = c.point(r == 0 ? 0 : ch.neighbor_indices[r - 1]);
    CHECK(std::fabs(std::fabs(ch.coords(r, 0)) - std::fabs(pt[0])) < 1e-12);
    CHECK(std::fabs(std::fabs(ch.coords(r, 1)) - std::fabs(pt[1])) < 1e-12);
    CHECK(std::fabs(ch.coords(r, 2)) < 1e-12);
  }
}

TEST_CASE("chart invariants on random neighborhoods") {
  const auto c = random_cloud(80, 6, 33);
  for (std::size_t center : {0u, 17u, 79u}) {
    const auto ch = local_chart(c, center, 20);
    REQUIRE(ch.samples() == 21);
    REQUIRE(ch.dim() == 6);
    CHECK(std::is_sorted(ch.eigenvalues.rbegin(), ch.eigenvalues.rend()));
    for (double v : ch.eigenvalues) CHECK(v >= -1e-12);
    for (std::size_t col = 0; col < 6; ++col) {
      double m = 0.0;
      for (std::size_t r = 0; r < 21; ++r) m += ch.coords(r, col);
      CHECK(std::fabs(m / 21.0) < 1e-10);
    }
    // mean + V * coords reproduces the original points.
    for (std::size_t r = 0; r < 21; ++r) {
      const std::size_t idx = r == 0 ? center : ch.neighbor_indices[r - 1];
      for (std::size_t i = 0; i < 6; ++i) {
        double x = ch.mean[i];
        for (std::size_t k = 0; k < 6; ++k) x += ch.basis(i, k) * ch.coords(r, k);
        CHECK(std::fabs(x - c.point(idx)[i]) < 1e-10);
      }
    }
    // Trace preservation: eigenvalues sum to the total variance (divisor K).
    double trace = 0.0;
    for (std::size_t col = 0; col < 6; ++col) trace += std::pow(column_std(ch.coords, col), 2) * 21.0 / 20.0;
    double ev = 0.0;
    for (double v : ch.eigenvalues) ev += v;
    CHECK(std::fabs(trace - ev) < 1e-10);
    CHECK(max_abs_diff(ch.basis.transpose() * ch.basis, Matrix::identity(6)) < 1e-10);
  }
}

TEST_CASE("coincident neighborhood is degenerate") {
  const PointCloud c(Matrix::from_rows({{1, 2}, {1, 2}, {1, 2}, {5, 5}}));
  CHECK_THROWS_AS(local_chart(c, 0, 2), DegenerateNeighborhood);
  CHECK_NOTHROW(local_chart(c, 0, 3));
}

TEST_CASE("chart is equivariant under rotation and translation") {
  ManifoldSpec spec{ManifoldKind::gaussian_surface, 2, 5, {}};
  SampleConfig sc;
  sc.n = 200;
  sc.seed = 4;
  sc.embed_rotation = false;
  const auto base = sample(spec, sc);
  const Matrix q = random_orthogonal(5, 99);
  Matrix moved(200, 5);
  for (std::size_t i = 0; i < 200; ++i)
    for (std::size_t r = 0; r < 5; ++r) {
      double s = 0.3 * static_cast<double>(r) - 1.0;
      for (std::size_t k = 0; k < 5; ++k) s += q(r, k) * base.point(i)[k];
      moved(i, r) = s;
    }
  const PointCloud other(moved);
  std::size_t compared = 0;
  for (std::size_t center = 0; center < 200; center += 13) {
    const auto a = local_chart(base, center, 15);
    const auto b = local_chart(other, center, 15);
    CHECK(a.neighbor_indices == b.neighbor_indices);
    for (std::size_t col = 0; col < 5; ++col) {
      const double gap_prev = col == 0 ? 1.0 : (a.eigenvalues[col - 1] - a.eigenvalues[col]);
      const double gap_next = col == 4 ? 1.0 : (a.eigenvalues[col] - a.eigenvalues[col + 1]);
      if (std::min(gap_prev, gap_next) < 1e-6 * a.eigenvalues[0] || a.eigenvalues[col] < 1e-8 * a.eigenvalues[0]) continue;
      const double sign = a.coords(1, col) * b.coords(1, col) >= 0 ? 1.0 : -1.0;
      for (std::size_t r = 0; r < a.samples(); ++r)
        CHECK(std::fabs(a.coords(r, col) - sign * b.coords(r, col)) < 1e-8);
      ++compared;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("nonconstant index") {
  Matrix m(4, 3);
  const double col0[] = {1, -1, 1, -1}, col1[] = {0.5, -0.5, 0.5, -0.5};
  for (std::size_t r = 0; r < 4; ++r) {
    m(r, 0) = col0[r];
    m(r, 1) = col1[r];
    m(r, 2) = 0.0;
  }
  CHECK(nonconstant_index(chart_with_coords(m)) == 2);
  for (std::size_t r = 0; r < 4; ++r) m(r, 2) = col0[r];
  CHECK(nonconstant_index(chart_with_coords(m)) == 3);
  for (std::size_t r = 0; r < 4; ++r) {
    m(r, 1) = 1e-3 * col0[r];
    m(r, 2) = 1e-12 * col0[r];
  }
  CHECK(nonconstant_index(chart_with_coords(m), 1e-8) == 2);
  CHECK(nonconstant_index(chart_with_coords(Matrix(4, 3))) == 0);
}
