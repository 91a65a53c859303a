#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <set>
#include <string>

#include "graphdim/error.hpp"
#include "graphdim/harness.hpp"
#include "graphdim/parallel.hpp"
#include "graphdim/random.hpp"

namespace graphdim {

void BenchConfig::validate() const {
  if (manifolds.empty()) throw InvalidParameter("bench: no manifolds configured");
  if (methods.empty()) throw InvalidParameter("bench: no methods configured");
  if (replicates < 1) throw InvalidParameter("bench: replicates must be >= 1");
  if (n < 3) throw InvalidParameter("bench: n must be >= 3");
  if (k_grid.empty()) throw InvalidParameter("bench: empty K grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (i > 0 && k_grid[i] <= k_grid[i - 1])
      throw InvalidParameter("bench: K grid must be strictly ascending");
    if (k_grid[i] >= n)
      throw InvalidParameter("bench: K = " + std::to_string(k_grid[i]) + " needs n > K");
    EstimatorConfig e = estimator;
    e.k = k_grid[i];
    e.validate();
  }
  if (window < 1) throw InvalidParameter("bench: window must be >= 1");
  if (!(noise_sigma >= 0.0)) throw InvalidParameter("bench: noise_sigma must be >= 0");
  if (!(stability_cutoff >= 0.0)) throw InvalidParameter("bench: stability_cutoff must be >= 0");
  for (const auto& m : manifolds) {
    if (m.id.empty()) throw InvalidParameter("bench: manifold id must not be empty");
    try {
      m.spec.validate();
    } catch (const InvalidSpec& e) {
      throw InvalidParameter("bench: manifold '" + m.id + "': " + e.what());
    }
  }
  check_seed_collisions(*this);
}

void check_seed_collisions(const BenchConfig& cfg) {
  std::set<std::string> ids;
  std::set<std::uint64_t> seeds;
  for (const auto& m : cfg.manifolds) {
    if (!ids.insert(m.id).second) throw InvalidParameter("bench: duplicate manifold id '" + m.id + "'");
    for (std::size_t r = 0; r < cfg.replicates; ++r) {
      if (!seeds.insert(derive_seed(cfg.master_seed, m.id, r)).second)
        throw InvalidParameter("bench: seed collision at manifold '" + m.id + "', replicate " +
                               std::to_string(r));
    }
  }
}

namespace {

struct Slot {
  double value = 0.0;
  bool ok = false;
  double seconds = 0.0;
};

}  // namespace

std::vector<RunResult> run_bench(const BenchConfig& cfg, int workers) {
  cfg.validate();
  const int threads = resolve_workers(workers);
  const std::size_t n_man = cfg.manifolds.size();
  const std::size_t n_rep = cfg.replicates;
  const std::size_t n_k = cfg.k_grid.size();
  const std::size_t n_meth = cfg.methods.size();
  const std::size_t k_max = std::max<std::size_t>(cfg.k_grid.back(), 2);

  // Stage 1: one cloud and one neighbor graph per (manifold, replicate).
  const std::size_t n_clouds = n_man * n_rep;
  std::vector<PointCloud> clouds(n_clouds);
  std::vector<NeighborGraph> graphs(n_clouds);
  std::exception_ptr failure;
  const long n_clouds_l = static_cast<long>(n_clouds);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long t = 0; t < n_clouds_l; ++t) {
    try {
      const std::size_t m = static_cast<std::size_t>(t) / n_rep;
      const std::size_t r = static_cast<std::size_t>(t) % n_rep;
      SampleConfig sc;
      sc.n = cfg.n;
      sc.seed = derive_seed(cfg.master_seed, cfg.manifolds[m].id, r);
      sc.noise_sigma = cfg.noise_sigma;
      sc.embed_rotation = cfg.embed_rotation;
      clouds[t] = sample(cfg.manifolds[m].spec, sc);
      graphs[t] = NeighborGraph(clouds[t], std::min(k_max, cfg.n - 1), 1);
    } catch (...) {
#pragma omp critical(graphdim_bench_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Stage 2: every (manifold, replicate, K, method) estimate into its own slot.
  const std::size_t n_tasks = n_clouds * n_k * n_meth;
  std::vector<Slot> slots(n_tasks);
  const long n_tasks_l = static_cast<long>(n_tasks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long t = 0; t < n_tasks_l; ++t) {
    const std::size_t task = static_cast<std::size_t>(t);
    const std::size_t meth = task % n_meth;
    const std::size_t ki = (task / n_meth) % n_k;
    const std::size_t cloud = task / (n_meth * n_k);
    EstimatorConfig ec = cfg.estimator;
    ec.k = cfg.k_grid[ki];
    const auto start = std::chrono::steady_clock::now();
    try {
      const GlobalEstimate g = estimate(clouds[cloud], graphs[cloud], cfg.methods[meth], ec, 1);
      slots[task].value = g.d_hat;
      slots[task].ok = true;
    } catch (const EstimationFailed&) {
      slots[task].ok = false;
    } catch (const DegenerateNeighborhood&) {
      slots[task].ok = false;
    } catch (...) {
#pragma omp critical(graphdim_bench_failure)
      if (!failure) failure = std::current_exception();
    }
    slots[task].seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  if (failure) std::rethrow_exception(failure);

  // Stage 3: deterministic reduction in (manifold, method, K, replicate) order.
  std::vector<RunResult> results;
  for (std::size_t m = 0; m < n_man; ++m) {
    for (std::size_t meth = 0; meth < n_meth; ++meth) {
      RunResult rr;
      rr.manifold = cfg.manifolds[m].id;
      rr.method = cfg.methods[meth];
      std::map<std::size_t, std::vector<double>> per_k;
      for (std::size_t ki = 0; ki < n_k; ++ki) {
        KStat ks;
        ks.k = cfg.k_grid[ki];
        for (std::size_t r = 0; r < n_rep; ++r) {
          const Slot& s = slots[((m * n_rep + r) * n_k + ki) * n_meth + meth];
          rr.wall_seconds += s.seconds;
          if (s.ok)
            ks.estimates.push_back(s.value);
          else
            ++ks.failures;
        }
        if (ks.estimates.empty()) {
          ks.mean = std::numeric_limits<double>::quiet_NaN();
          ks.std = std::numeric_limits<double>::quiet_NaN();
        } else {
          const MeanStd ms = mean_std(ks.estimates);
          ks.mean = ms.mean;
          ks.std = ms.std;
        }
        per_k[ks.k] = ks.estimates;
        rr.per_k.push_back(std::move(ks));
      }
      const bool any = std::any_of(rr.per_k.begin(), rr.per_k.end(),
                                   [](const KStat& k) { return !k.estimates.empty(); });
      if (any)
        rr.stability = stability_search(per_k, std::min(cfg.window, n_k), cfg.stability_cutoff);
      results.push_back(std::move(rr));
    }
  }
  return results;
}

}  // namespace graphdim
