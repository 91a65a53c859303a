#include "graphdim/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "graphdim/error.hpp"
#include "graphdim/random.hpp"

namespace graphdim {

namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
  ManifoldKind kind;
  std::string_view name;
};

constexpr KindName kKinds[] = {
    {ManifoldKind::sphere, "sphere"},
    {ManifoldKind::ball, "ball"},
    {ManifoldKind::gaussian_surface, "gaussian_surface"},
    {ManifoldKind::deformed_sphere, "deformed_sphere"},
    {ManifoldKind::cylinder, "cylinder"},
    {ManifoldKind::helix, "helix"},
    {ManifoldKind::swiss_roll, "swiss_roll"},
    {ManifoldKind::moebius, "moebius"},
    {ManifoldKind::torus, "torus"},
    {ManifoldKind::hyperbolic, "hyperbolic"},
};

// Swiss roll coordinates are divided by this so the roll spans roughly the
// unit cube instead of [-14, 14].
constexpr double kSwissRollScale = 4.5 * kPi;
// Half-width of the Moebius band (total width 0.4).
constexpr double kMoebiusHalfWidth = 0.2;

}  // namespace

std::string_view kind_name(ManifoldKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "?";
}

ManifoldKind parse_kind(std::string_view name) {
  for (const auto& e : kKinds)
    if (e.name == name) return e.kind;
  if (name == "gaussian") return ManifoldKind::gaussian_surface;
  if (name == "deformed-sphere") return ManifoldKind::deformed_sphere;
  if (name == "swiss-roll") return ManifoldKind::swiss_roll;
  throw InvalidSpec("unknown manifold kind '" + std::string(name) + "'");
}

double ManifoldSpec::param(const std::string& key) const {
  if (auto it = params.find(key); it != params.end()) return it->second;
  if (key == "R") return 1.0;
  if (key == "r") return 0.5;
  if (key == "c") return 0.01;
  if (key == "variance") return 0.25;
  throw InvalidSpec("unknown manifold parameter '" + key + "'");
}

std::size_t ManifoldSpec::raw_dim() const {
  switch (kind) {
    case ManifoldKind::sphere:
    case ManifoldKind::gaussian_surface:
      return d + 1;
    case ManifoldKind::ball:
      return d;
    case ManifoldKind::deformed_sphere:
      return 2 * d;
    case ManifoldKind::torus:
      return 4;
    default:
      return 3;
  }
}

void ManifoldSpec::validate() const {
  const std::string name(kind_name(kind));
  if (d < 1) throw InvalidSpec(name + ": intrinsic dimension must be >= 1");
  if (d >= p) throw InvalidSpec(name + ": need d < p");
  auto fixed = [&](std::size_t want) {
    if (d != want) throw InvalidSpec(name + " has intrinsic dimension " + std::to_string(want));
  };
  switch (kind) {
    case ManifoldKind::helix:
      fixed(1);
      break;
    case ManifoldKind::cylinder:
    case ManifoldKind::swiss_roll:
    case ManifoldKind::moebius:
    case ManifoldKind::torus:
    case ManifoldKind::hyperbolic:
      fixed(2);
      break;
    default:
      break;
  }
  if (raw_dim() > p)
    throw InvalidSpec(name + " with d = " + std::to_string(d) + " needs p >= " +
                      std::to_string(raw_dim()));
  for (const auto& [key, value] : params) {
    if (key != "R" && key != "r" && key != "c" && key != "variance")
      throw InvalidSpec(name + ": unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw InvalidSpec(name + ": parameter " + key + " is not finite");
  }
  if (kind == ManifoldKind::sphere || kind == ManifoldKind::ball) {
    if (!(param("R") > 0.0)) throw InvalidSpec(name + ": R must be positive");
  }
  if (kind == ManifoldKind::deformed_sphere) {
    const double big = param("R"), small = param("r"), c = param("c");
    if (!(big > small && small > 0.0 && c > 0.0))
      throw InvalidSpec("deformed_sphere: need R > r > 0 and c > 0");
  }
  if (kind == ManifoldKind::gaussian_surface && !(param("variance") > 0.0))
    throw InvalidSpec("gaussian_surface: variance must be positive");
}

std::vector<double> deformed_sphere_map(std::span<const double> u, double big_r, double small_r,
                                        double c) {
  const std::size_t d = u.size();
  std::vector<double> x(2 * d);
  for (std::size_t j = 0; j < d; ++j) {
    const double radius = big_r + small_r * std::cos(2.0 * c * kPi * u[j]);
    x[j] = radius * std::cos(2.0 * kPi * u[j]);
    x[j + d] = radius * std::sin(2.0 * kPi * u[j]);
  }
  return x;
}

Matrix random_orthogonal(std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix q(p, p);
  for (double& v : q.data()) v = rng.normal();
  // Modified Gram-Schmidt on columns, two passes.
  for (std::size_t c = 0; c < p; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t prev = 0; prev < c; ++prev) {
        double dot = 0.0;
        for (std::size_t r = 0; r < p; ++r) dot += q(r, prev) * q(r, c);
        for (std::size_t r = 0; r < p; ++r) q(r, c) -= dot * q(r, prev);
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < p; ++r) norm += q(r, c) * q(r, c);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < p; ++r) q(r, c) /= norm;
  }
  return q;
}

namespace {

void draw_raw(const ManifoldSpec& spec, Rng& rng, std::span<double> out) {
  const std::size_t d = spec.d;
  switch (spec.kind) {
    case ManifoldKind::sphere: {
      double norm = 0.0;
      for (std::size_t i = 0; i <= d; ++i) {
        out[i] = rng.normal();
        norm += out[i] * out[i];
      }
      norm = std::sqrt(norm);
      const double radius = spec.param("R");
      for (std::size_t i = 0; i <= d; ++i) out[i] *= radius / norm;
    } break;
    case ManifoldKind::ball: {
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = rng.normal();
        norm += out[i] * out[i];
      }
      norm = std::sqrt(norm);
      const double radius = spec.param("R") * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
      for (std::size_t i = 0; i < d; ++i) out[i] *= radius / norm;
    } break;
    case ManifoldKind::gaussian_surface: {
      const double var = spec.param("variance");
      const double sd = std::sqrt(var);
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        out[i] = sd * rng.normal();
        sq += out[i] * out[i];
      }
      out[d] = std::pow(2.0 * kPi * var, -0.5 * static_cast<double>(d)) * std::exp(-sq / (2.0 * var));
    } break;
    case ManifoldKind::deformed_sphere: {
      std::vector<double> u(d);
      for (double& v : u) v = rng.uniform();
      const auto x = deformed_sphere_map(u, spec.param("R"), spec.param("r"), spec.param("c"));
      std::copy(x.begin(), x.end(), out.begin());
    } break;
    case ManifoldKind::cylinder: {
      const double theta = rng.uniform(0.0, 2.0 * kPi);
      const double h = rng.uniform();
      out[0] = std::cos(theta);
      out[1] = std::sin(theta);
      out[2] = h;
    } break;
    case ManifoldKind::helix: {
      const double t = rng.uniform(0.0, 2.0 * kPi);
      out[0] = std::cos(t);
      out[1] = std::sin(t);
      out[2] = t / (2.0 * kPi);
    } break;
    case ManifoldKind::swiss_roll: {
      const double t = rng.uniform(1.5 * kPi, 4.5 * kPi);
      const double h = rng.uniform(0.0, 21.0);
      out[0] = t * std::cos(t) / kSwissRollScale;
      out[1] = t * std::sin(t) / kSwissRollScale;
      out[2] = h / kSwissRollScale;
    } break;
    case ManifoldKind::moebius: {
      const double u = rng.uniform(0.0, 2.0 * kPi);
      const double v = rng.uniform(-kMoebiusHalfWidth, kMoebiusHalfWidth);
      const double radius = 1.0 + v * std::cos(0.5 * u);
      out[0] = radius * std::cos(u);
      out[1] = radius * std::sin(u);
      out[2] = v * std::sin(0.5 * u);
    } break;
    case ManifoldKind::torus: {
      const double u = rng.uniform(0.0, 2.0 * kPi);
      const double v = rng.uniform(0.0, 2.0 * kPi);
      const double s = 1.0 / std::sqrt(2.0);
      out[0] = s * std::cos(u);
      out[1] = s * std::sin(u);
      out[2] = s * std::cos(v);
      out[3] = s * std::sin(v);
    } break;
    case ManifoldKind::hyperbolic: {
      const double u = rng.uniform(-1.0, 1.0);
      const double v = rng.uniform(-1.0, 1.0);
      out[0] = u;
      out[1] = v;
      out[2] = u * u - v * v;
    } break;
  }
}

}  // namespace

PointCloud sample(const ManifoldSpec& spec, const SampleConfig& cfg) {
  spec.validate();
  if (cfg.n < 2) throw InvalidParameter("sample: need n >= 2");
  if (!(cfg.noise_sigma >= 0.0)) throw InvalidParameter("sample: noise_sigma must be >= 0");

  const std::size_t p = spec.p;
  Matrix pts(cfg.n, p);
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.n; ++i) draw_raw(spec, rng, pts.row(i));

  if (cfg.embed_rotation) {
    const Matrix q = random_orthogonal(p, derive_seed(cfg.seed, "rotation", 0));
    std::vector<double> tmp(p);
    for (std::size_t i = 0; i < cfg.n; ++i) {
      auto x = pts.row(i);
      for (std::size_t r = 0; r < p; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < p; ++c) s += q(r, c) * x[c];
        tmp[r] = s;
      }
      std::copy(tmp.begin(), tmp.end(), x.begin());
    }
  }
  PointCloud cloud(std::move(pts));
  if (cfg.noise_sigma > 0.0) cloud = add_noise(cloud, cfg.noise_sigma, derive_seed(cfg.seed, "noise", 0));
  return cloud;
}

PointCloud add_noise(const PointCloud& cloud, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidParameter("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return cloud;
  Matrix pts = cloud.points();
  Rng rng(seed);
  for (double& v : pts.data()) v += sigma * rng.normal();
  return PointCloud(std::move(pts));
}

}  // namespace graphdim
