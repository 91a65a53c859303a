#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace graphdim {

/// xoshiro256** seeded through splitmix64. This generator (and the
/// uniform/normal transforms below) is the pinned source of every random draw
/// in the library; changing it changes every sampled data set.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Seed for one (label, replicate) stream under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t replicate);

}  // namespace graphdim
