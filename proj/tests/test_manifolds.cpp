#include <cmath>
#include <numbers>

#include "doctest.h"
#include "graphdim/error.hpp"
#include "graphdim/manifolds.hpp"
#include "graphdim/random.hpp"

using namespace graphdim;

namespace {

PointCloud draw(ManifoldKind kind, std::size_t d, std::size_t p, std::size_t n, std::uint64_t seed,
                bool rotate = true, double noise = 0.0) {
  SampleConfig sc;
  sc.n = n;
  sc.seed = seed;
  sc.embed_rotation = rotate;
  sc.noise_sigma = noise;
  return sample(ManifoldSpec{kind, d, p, {}}, sc);
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("random") {
  TEST_CASE("generator output is pinned") {
    Rng rng(42);
    CHECK(rng.next() == 0x15780b2e0c2ec716ULL);
    CHECK(rng.next() == 0x6104d9866d113a7eULL);
    CHECK(rng.next() == 0xae17533239e499a1ULL);
    CHECK(rng.next() == 0xecb8ad4703b360a1ULL);
    CHECK(Rng(42).uniform() == 0.08386297105988216);
  }

  TEST_CASE("seed derivation is pinned") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(derive_seed(7, "M11", 0) == 0x681559f9a59e6105ULL);
    CHECK(derive_seed(7, "M11", 1) == 0xc8bb5a67026c9deeULL);
    CHECK(derive_seed(7, "M11", 0) != derive_seed(8, "M11", 0));
    CHECK(derive_seed(7, "M11", 0) != derive_seed(7, "M12", 0));
  }

  TEST_CASE("uniform and normal moments") {
    Rng rng(5);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      CHECK_UNARY(u >= 0.0 && u < 1.0);
      su += u;
      const double z = rng.normal();
      sn += z;
      sn2 += z * z;
    }
    CHECK(std::fabs(su / n - 0.5) < 0.003);
    CHECK(std::fabs(sn / n) < 0.01);
    CHECK(std::fabs(sn2 / n - 1.0) < 0.015);
  }
}

TEST_SUITE("manifolds") {
  TEST_CASE("sphere points have unit norm after rotation") {
    const auto c = draw(ManifoldKind::sphere, 5, 10, 500, 1);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::fabs(norm(c.point(i)) - 1.0) < 1e-12);
  }

  TEST_CASE("sphere radius parameter") {
    SampleConfig sc;
    sc.n = 50;
    const auto c = sample(ManifoldSpec{ManifoldKind::sphere, 2, 4, {{"R", 3.0}}}, sc);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::fabs(norm(c.point(i)) - 3.0) < 1e-12);
  }

  TEST_CASE("deformed sphere map at the origin") {
    const auto x = deformed_sphere_map(std::vector<double>{0, 0, 0}, 1.0, 0.5, 0.01);
    CHECK(x == std::vector<double>{1.5, 1.5, 1.5, 0, 0, 0});
    const auto y = deformed_sphere_map(std::vector<double>{0.25}, 2.0, 1.0, 1.0);
    CHECK(std::fabs(y[0]) < 1e-15);
    CHECK(std::fabs(y[1] - 2.0) < 1e-15);  // cos(pi/2) = 0 inside the radius term
  }

  TEST_CASE("ball area ratio") {
    const auto c = draw(ManifoldKind::ball, 2, 3, 100000, 3);
    std::size_t inside = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double r = norm(c.point(i));
      CHECK(r <= 1.0 + 1e-12);
      inside += r <= 0.5;
    }
    CHECK(std::fabs(static_cast<double>(inside) / 1e5 - 0.25) < 0.01);
  }

  TEST_CASE("sphere coordinate marginals are centered") {
    const auto c = draw(ManifoldKind::sphere, 3, 4, 100000, 9, false);
    for (std::size_t axis = 0; axis < 4; ++axis) {
      double s = 0, s2 = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        s += c.point(i)[axis];
        s2 += c.point(i)[axis] * c.point(i)[axis];
      }
      const double mean = s / 1e5;
      const double se = std::sqrt(s2 / 1e5 - mean * mean) / std::sqrt(1e5);
      CHECK(std::fabs(mean) < 3.0 * se);
    }
  }

  TEST_CASE("rotation preserves pairwise distances") {
    const auto flat = draw(ManifoldKind::swiss_roll, 2, 6, 80, 4, false);
    const auto rot = draw(ManifoldKind::swiss_roll, 2, 6, 80, 4, true);
    CHECK_FALSE(flat == rot);
    for (std::size_t i = 0; i < 80; ++i)
      for (std::size_t j = i + 1; j < 80; ++j)
        CHECK(std::fabs(std::sqrt(squared_distance(flat.point(i), flat.point(j))) -
                        std::sqrt(squared_distance(rot.point(i), rot.point(j)))) < 1e-10);
    for (std::size_t i = 0; i < 80; ++i)
      for (std::size_t c = 3; c < 6; ++c) CHECK(flat.point(i)[c] == 0.0);
  }

  TEST_CASE("random orthogonal matrices are orthonormal") {
    for (std::size_t p : {2u, 5u, 20u, 40u}) {
      const Matrix q = random_orthogonal(p, p);
      CHECK(max_abs_diff(q.transpose() * q, Matrix::identity(p)) < 1e-12);
    }
  }

  TEST_CASE("fixed-dimension kinds lie on their surfaces") {
    const double pi = std::numbers::pi;
    auto c = draw(ManifoldKind::cylinder, 2, 3, 300, 1, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      CHECK(std::fabs(x[0] * x[0] + x[1] * x[1] - 1.0) < 1e-12);
      CHECK_UNARY(x[2] >= 0.0 && x[2] <= 1.0);
    }
    c = draw(ManifoldKind::helix, 1, 3, 300, 2, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      const double t = 2.0 * pi * x[2];
      CHECK(std::fabs(x[0] - std::cos(t)) < 1e-12);
      CHECK(std::fabs(x[1] - std::sin(t)) < 1e-12);
    }
    c = draw(ManifoldKind::torus, 2, 4, 300, 3, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      CHECK(std::fabs(x[0] * x[0] + x[1] * x[1] - 0.5) < 1e-12);
      CHECK(std::fabs(x[2] * x[2] + x[3] * x[3] - 0.5) < 1e-12);
    }
    c = draw(ManifoldKind::hyperbolic, 2, 3, 300, 4, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      CHECK(std::fabs(x[2] - (x[0] * x[0] - x[1] * x[1])) < 1e-12);
      CHECK_UNARY(std::fabs(x[0]) <= 1.0 && std::fabs(x[1]) <= 1.0);
    }
    c = draw(ManifoldKind::swiss_roll, 2, 3, 300, 5, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      const double t = std::hypot(x[0], x[1]) * 4.5 * pi;
      CHECK_UNARY(t >= 1.5 * pi - 1e-9 && t <= 4.5 * pi + 1e-9);
    }
    c = draw(ManifoldKind::moebius, 2, 3, 300, 6, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      const double radial = std::hypot(x[0], x[1]) - 1.0;
      CHECK(std::hypot(radial, x[2]) <= 0.2 + 1e-12);
    }
    c = draw(ManifoldKind::gaussian_surface, 2, 3, 300, 7, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      const double phi = std::exp(-(x[0] * x[0] + x[1] * x[1]) / 0.5) / (2.0 * pi * 0.25);
      CHECK(std::fabs(x[2] - phi) < 1e-12);
    }
    c = draw(ManifoldKind::deformed_sphere, 2, 4, 300, 8, false);
    for (std::size_t i = 0; i < 300; ++i) {
      const auto x = c.point(i);
      for (std::size_t j = 0; j < 2; ++j) {
        const double r = std::hypot(x[j], x[j + 2]);
        CHECK_UNARY(r >= 1.0 + 0.5 * std::cos(0.02 * pi) - 1e-12 && r <= 1.5 + 1e-12);
      }
    }
  }

  TEST_CASE("noise: zero is identity, std matches sigma, seeds are reproducible") {
    const auto c = draw(ManifoldKind::sphere, 1, 2, 100000, 10, false);
    CHECK(add_noise(c, 0.0, 1) == c);
    const auto noisy = add_noise(c, 0.1, 77);
    CHECK(noisy == add_noise(c, 0.1, 77));
    CHECK_FALSE(noisy == add_noise(c, 0.1, 78));
    for (std::size_t axis = 0; axis < 2; ++axis) {
      double s = 0, s2 = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double e = noisy.point(i)[axis] - c.point(i)[axis];
        s += e;
        s2 += e * e;
      }
      const double sd = std::sqrt(s2 / 1e5 - (s / 1e5) * (s / 1e5));
      CHECK_UNARY(sd >= 0.099 && sd <= 0.101);
    }
    CHECK_THROWS_AS(add_noise(c, -1.0, 1), InvalidParameter);
  }

  TEST_CASE("sampling is deterministic and noise leaves the clean draw intact") {
    const auto a = draw(ManifoldKind::torus, 2, 6, 200, 123);
    CHECK(a == draw(ManifoldKind::torus, 2, 6, 200, 123));
    CHECK_FALSE(a == draw(ManifoldKind::torus, 2, 6, 200, 124));
    const auto n = draw(ManifoldKind::torus, 2, 6, 200, 123, true, 0.05);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < 200; ++i)
      for (std::size_t c = 0; c < 6; ++c)
        max_dev = std::max(max_dev, std::fabs(n.point(i)[c] - a.point(i)[c]));
    CHECK(max_dev > 0.0);
    CHECK(max_dev < 0.05 * 6.0);
  }

  TEST_CASE("manifold parameter validation") {
    auto bad = [](ManifoldSpec s) {
    INFO(kind_name(s.kind), " d=", s.d, " p=", s.p);
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
  };
    bad({ManifoldKind::sphere, 5, 5, {}});
    bad({ManifoldKind::sphere, 0, 5, {}});
    bad({ManifoldKind::sphere, 2, 4, {{"R", -1.0}}});
    bad({ManifoldKind::helix, 2, 3, {}});
    bad({ManifoldKind::torus, 2, 3, {}});
    bad({ManifoldKind::cylinder, 1, 3, {}});
    bad({ManifoldKind::deformed_sphere, 3, 5, {}});
    bad({ManifoldKind::deformed_sphere, 3, 6, {{"r", 2.0}}});
    bad({ManifoldKind::deformed_sphere, 3, 6, {{"c", 0.0}}});
    bad({ManifoldKind::gaussian_surface, 3, 6, {{"variance", 0.0}}});
    bad({ManifoldKind::sphere, 2, 4, {{"radius", 1.0}}});
    CHECK_NOTHROW(ManifoldSpec({ManifoldKind::deformed_sphere, 3, 6, {{"c", 0.01}}}).validate());
    CHECK_NOTHROW(ManifoldSpec({ManifoldKind::ball, 5, 10, {}}).validate());
    SampleConfig sc;
    sc.n = 1;
    CHECK_THROWS_AS(sample(ManifoldSpec{ManifoldKind::sphere, 2, 3, {}}, sc), InvalidParameter);
  }

  TEST_CASE("kind names round-trip") {
    for (auto k : {ManifoldKind::sphere, ManifoldKind::ball, ManifoldKind::gaussian_surface,
                   ManifoldKind::deformed_sphere, ManifoldKind::cylinder, ManifoldKind::helix,
                   ManifoldKind::swiss_roll, ManifoldKind::moebius, ManifoldKind::torus,
                   ManifoldKind::hyperbolic})
      CHECK(parse_kind(kind_name(k)) == k);
    CHECK_THROWS_AS(parse_kind("klein_bottle"), InvalidSpec);
  }
}
