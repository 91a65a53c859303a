#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphdim/estimators.hpp"
#include "graphdim/manifolds.hpp"

namespace graphdim {

// ---- stability aggregation -------------------------------------------------

struct StabilityResult {
  std::size_t k_first = 0;  // first K of the chosen window
  std::size_t k_last = 0;   // last K of the chosen window
  double mean = 0.0;
  double std = 0.0;
  bool stable = true;  // false: fell back to the whole grid

  friend bool operator==(const StabilityResult&, const StabilityResult&) = default;
};

/// Mean and population standard deviation (ddof = 0).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& xs);

/// Scans every run of `window` consecutive grid points (ascending K), pools
/// their estimates and keeps the run with the smallest pooled standard
/// deviation; ties go to the smallest starting K. If that minimum exceeds
/// `cutoff`, the whole grid is pooled instead and the result is marked
/// unstable. Grid points without estimates are dropped before scanning and
/// the window shrinks to the number of points left. Throws InvalidInput when
/// no estimates remain, InvalidParameter when window is 0 or exceeds the grid.
StabilityResult stability_search(const std::map<std::size_t, std::vector<double>>& per_k,
                                 std::size_t window, double cutoff = 1.0);

/// Parses "start:stop:step" (inclusive) or a comma list "20,30,40".
std::vector<std::size_t> parse_k_grid(const std::string& text);

// ---- benchmark configuration and results -----------------------------------

struct ManifoldEntry {
  std::string id;
  ManifoldSpec spec;
};

struct BenchConfig {
  std::vector<ManifoldEntry> manifolds;
  std::vector<Method> methods;
  std::size_t n = 500;
  std::size_t replicates = 10;
  std::vector<std::size_t> k_grid;
  std::size_t window = 5;
  std::uint64_t master_seed = 0;
  double noise_sigma = 0.0;
  bool embed_rotation = true;
  double stability_cutoff = 1.0;
  EstimatorConfig estimator;  // k is overridden per grid point

  /// Throws InvalidParameter on an empty manifold/method list, a grid that is
  /// not strictly ascending or reaches n, or a zero window. A window longer
  /// than the grid is shortened to the grid length when aggregating.
  void validate() const;
};

BenchConfig bench_config_from_json(const nlohmann::json& j);
nlohmann::json bench_config_to_json(const BenchConfig& cfg);

struct KStat {
  std::size_t k = 0;
  std::vector<double> estimates;  // one per successful replicate, replicate order
  std::size_t failures = 0;
  double mean = 0.0;  // NaN when every replicate failed
  double std = 0.0;

  friend bool operator==(const KStat&, const KStat&) = default;
};

struct RunResult {
  std::string manifold;
  Method method = Method::qe;
  std::vector<KStat> per_k;
  std::optional<StabilityResult> stability;  // empty when every K failed
  double wall_seconds = 0.0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Samples every (manifold, replicate) with seed derive_seed(master_seed, id,
/// replicate), evaluates every (K, method), then stability-aggregates per
/// (manifold, method). Estimation failures are counted, never thrown. Output
/// is identical for any worker count. wall_seconds sums the estimation time
/// of the run's tasks.
std::vector<RunResult> run_bench(const BenchConfig& cfg, int workers = 0);

/// Throws InvalidParameter if two (manifold, replicate) streams share a seed
/// or two manifolds share an id.
void check_seed_collisions(const BenchConfig& cfg);

// ---- I/O ----------------------------------------------------------------------

struct CsvOptions {
  bool header = false;
};

/// One point per row, comma separated, '.' decimal point. Throws ParseError
/// with a 1-based row/column location, IoError when the file cannot be read.
PointCloud parse_cloud_csv(const std::string& text, CsvOptions opts = {});
PointCloud load_cloud(const std::filesystem::path& path, CsvOptions opts = {});

/// Shortest round-trip decimal formatting, no header.
std::string format_cloud_csv(const PointCloud& cloud);
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path);

/// Shortest round-trip text for a double ("nan" for NaN).
std::string format_double(double x);

/// Columns: manifold,method,K,mean,std,stable,window. Per-K rows leave
/// stable/window empty; the summary row leaves K empty.
std::string results_to_csv(const std::vector<RunResult>& results);

/// Result files omit wall time unless asked, so identical configurations
/// produce identical bytes.
nlohmann::json results_to_json(const std::vector<RunResult>& results, bool with_timing = false);
std::vector<RunResult> results_from_json(const nlohmann::json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

enum class ResultFormat { csv, json };
void write_results(const std::vector<RunResult>& results, const std::filesystem::path& path,
                   ResultFormat format);

}  // namespace graphdim
