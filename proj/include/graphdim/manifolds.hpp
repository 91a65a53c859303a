#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphdim/neighborhood.hpp"

namespace graphdim {

enum class ManifoldKind {
  sphere,
  ball,
  gaussian_surface,
  deformed_sphere,
  cylinder,
  helix,
  swiss_roll,
  moebius,
  torus,
  hyperbolic,
};

std::string_view kind_name(ManifoldKind k);
ManifoldKind parse_kind(std::string_view name);

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::sphere;
  std::size_t d = 1;
  std::size_t p = 2;
  /// Kind-specific: "R" (sphere, ball, deformed_sphere), "r" and "c"
  /// (deformed_sphere), "variance" (gaussian_surface). Missing keys take
  /// the defaults R = 1, r = 0.5, c = 0.01, variance = 0.25.
  std::map<std::string, double> params;

  double param(const std::string& key) const;
  /// Coordinates produced before zero padding.
  std::size_t raw_dim() const;
  /// Throws InvalidSpec for unsupported combinations or parameter domains.
  void validate() const;
};

struct SampleConfig {
  std::size_t n = 500;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  bool embed_rotation = true;
};

/// Draws n points: raw parametrization, zero padding to p, optional seeded
/// random rotation, then isotropic Gaussian noise. Bit-reproducible per seed.
PointCloud sample(const ManifoldSpec& spec, const SampleConfig& cfg);

/// Adds i.i.d. N(0, sigma^2) to every coordinate. sigma = 0 returns the
/// input unchanged. Throws InvalidParameter for sigma < 0.
PointCloud add_noise(const PointCloud& cloud, double sigma, std::uint64_t seed);

/// Haar-ish random orthogonal matrix (Gram-Schmidt of a Gaussian matrix).
Matrix random_orthogonal(std::size_t p, std::uint64_t seed);

/// Deformed-sphere map [0,1]^d -> R^{2d}:
/// x_j = (R + r cos(2 c pi u_j)) cos(2 pi u_j), x_{j+d} = (...) sin(2 pi u_j).
std::vector<double> deformed_sphere_map(std::span<const double> u, double big_r, double small_r,
                                        double c);

}  // namespace graphdim
