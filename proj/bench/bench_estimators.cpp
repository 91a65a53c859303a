#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "graphdim/graphdim.hpp"

using namespace graphdim;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial reference vs ladder/OpenMP estimator timings"};
  std::size_t n = 500, d = 5, p = 10, k = 40;
  int repeats = 3;
  std::vector<int> workers{1, 2, 4};
  app.add_option("--n", n)->capture_default_str();
  app.add_option("--d", d)->capture_default_str();
  app.add_option("--p", p)->capture_default_str();
  app.add_option("--k", k)->capture_default_str();
  app.add_option("--repeats", repeats)->capture_default_str();
  app.add_option("--workers", workers, "Worker counts for the parallel path");
  CLI11_PARSE(app, argc, argv);

  ManifoldSpec spec{ManifoldKind::sphere, d, p, {}};
  SampleConfig sc;
  sc.n = n;
  sc.seed = 7;
  const PointCloud cloud = sample(spec, sc);
  EstimatorConfig cfg;
  cfg.k = k;

  std::printf("sphere d=%zu p=%zu n=%zu K=%zu, best of %d\n", d, p, n, k, repeats);
  std::printf("%-10s %-22s %12s %10s %12s\n", "method", "path", "seconds", "speedup", "d_hat");
  for (Method m : {Method::qe, Method::tls, Method::local_pca}) {
    GlobalEstimate ref{};
    const double t_ref = best_of(repeats, [&] { ref = reference::estimate(cloud, m, cfg); });
    std::printf("%-10s %-22s %12.4f %10s %12.6f\n", std::string(method_name(m)).c_str(),
                "reference (serial)", t_ref, "1.00", ref.d_hat);
    for (int w : workers) {
      GlobalEstimate fast{};
      const double t = best_of(repeats, [&] { fast = estimate(cloud, m, cfg, w); });
      const std::string label = "ladder, " + std::to_string(resolve_workers(w)) + " worker(s)";
      std::printf("%-10s %-22s %12.4f %10.2f %12.6f%s\n", std::string(method_name(m)).c_str(),
                  label.c_str(), t, t_ref / t, fast.d_hat,
                  fast.d_hat == ref.d_hat ? "" : "  (differs from reference)");
    }
  }
  return 0;
}
