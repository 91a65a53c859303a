// graphdim command-line front end: synth, estimate, bench.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "graphdim/graphdim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kEstimation = 3 };

struct SynthArgs {
  std::string kind;
  std::size_t d = 0;
  std::size_t p = 0;
  std::size_t n = 500;
  std::uint64_t seed = 0;
  double noise = 0.0;
  bool no_rotate = false;
  std::vector<std::string> params;
  std::string out;
};

struct EstimateArgs {
  std::string in;
  std::string method = "qe";
  std::size_t k = 20;
  std::string k_grid;
  std::size_t window = 5;
  double alpha = 0.01;
  double cutoff = 1.0;
  bool header = false;
  std::string out;
};

struct BenchArgs {
  std::string config;
  std::string out;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    graphdim::write_text(out, text);
}

int run_synth(const SynthArgs& a) {
  graphdim::ManifoldSpec spec;
  spec.kind = graphdim::parse_kind(a.kind);
  spec.d = a.d;
  spec.p = a.p;
  for (const auto& kv : a.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw graphdim::InvalidParameter("--param expects key=value, got '" + kv + "'");
    std::size_t used = 0;
    const std::string value = kv.substr(eq + 1);
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw graphdim::InvalidParameter("--param value is not a number: '" + kv + "'");
    spec.params[kv.substr(0, eq)] = v;
  }
  graphdim::SampleConfig sc;
  sc.n = a.n;
  sc.seed = a.seed;
  sc.noise_sigma = a.noise;
  sc.embed_rotation = !a.no_rotate;
  emit(graphdim::format_cloud_csv(graphdim::sample(spec, sc)), a.out);
  return kOk;
}

json global_to_json(const graphdim::GlobalEstimate& g) {
  return {{"d_hat", g.d_hat},
          {"d_rounded", g.d_rounded},
          {"n_local", g.n_local},
          {"n_weighted", g.n_weighted}};
}

int run_estimate(const EstimateArgs& a) {
  const graphdim::Method method = graphdim::parse_method(a.method);
  graphdim::EstimatorConfig cfg;
  cfg.alpha = a.alpha;
  cfg.k = a.k;
  const graphdim::PointCloud cloud = graphdim::load_cloud(a.in, {a.header});

  json doc;
  doc["method"] = std::string(graphdim::method_name(method));
  doc["n"] = cloud.size();
  doc["p"] = cloud.dim();

  if (a.k_grid.empty()) {
    if (cfg.k >= cloud.size())
      throw graphdim::InvalidParameter("K = " + std::to_string(cfg.k) + " needs more than K points");
    doc["K"] = cfg.k;
    doc.update(global_to_json(graphdim::estimate(cloud, method, cfg)));
    emit(doc.dump(2) + "\n", a.out);
    return kOk;
  }

  const auto grid = graphdim::parse_k_grid(a.k_grid);
  if (grid.back() >= cloud.size())
    throw graphdim::InvalidParameter("K grid reaches " + std::to_string(grid.back()) +
                                     " but the cloud has only " + std::to_string(cloud.size()) +
                                     " points");
  for (std::size_t k : grid) {
    graphdim::EstimatorConfig c = cfg;
    c.k = k;
    c.validate();
  }
  const graphdim::NeighborGraph graph(cloud, std::max<std::size_t>(grid.back(), 2));
  std::map<std::size_t, std::vector<double>> per_k;
  json rows = json::array();
  for (std::size_t k : grid) {
    graphdim::EstimatorConfig c = cfg;
    c.k = k;
    json row{{"K", k}};
    try {
      const auto g = graphdim::estimate(cloud, graph, method, c);
      row.update(global_to_json(g));
      per_k[k] = {g.d_hat};
    } catch (const graphdim::EstimationFailed& e) {
      row["error"] = e.what();
      per_k[k] = {};
    }
    rows.push_back(std::move(row));
  }
  doc["per_k"] = std::move(rows);
  bool any = false;
  for (const auto& [k, xs] : per_k) any = any || !xs.empty();
  if (!any) throw graphdim::EstimationFailed("estimation failed at every K of the grid");
  const auto s = graphdim::stability_search(per_k, std::min(a.window, grid.size()), a.cutoff);
  doc["stability"] = {{"k_first", s.k_first}, {"k_last", s.k_last}, {"mean", s.mean},
                      {"std", s.std},         {"stable", s.stable}};
  doc["d_hat"] = s.mean;
  emit(doc.dump(2) + "\n", a.out);
  return kOk;
}

int run_bench(const BenchArgs& a) {
  json j;
  try {
    j = json::parse(graphdim::read_text(a.config));
  } catch (const json::parse_error& e) {
    throw graphdim::ParseError(a.config + ": " + e.what());
  }
  const graphdim::BenchConfig cfg = graphdim::bench_config_from_json(j);
  const auto results = graphdim::run_bench(cfg);

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw graphdim::IoError("cannot create directory '" + a.out + "': " + ec.message());
  graphdim::write_results(results, dir / "results.csv", graphdim::ResultFormat::csv);
  graphdim::write_results(results, dir / "results.json", graphdim::ResultFormat::json);
  std::string timings = "manifold,method,wall_seconds\n";
  for (const auto& r : results)
    timings += r.manifold + "," + std::string(graphdim::method_name(r.method)) + "," +
               graphdim::format_double(r.wall_seconds) + "\n";
  graphdim::write_text(dir / "timings.csv", timings);

  for (const auto& r : results) {
    std::cout << r.manifold << " " << graphdim::method_name(r.method) << ": ";
    if (r.stability)
      std::cout << r.stability->mean << " +- " << r.stability->std << " (K " << r.stability->k_first
                << "-" << r.stability->k_last << (r.stability->stable ? "" : ", unstable") << ")\n";
    else
      std::cout << "failed at every K\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic dimension estimation with quadratic local models"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Sample a synthetic manifold to CSV");
  s->add_option("--kind", synth.kind, "sphere, ball, gaussian_surface, deformed_sphere, cylinder, "
                                      "helix, swiss_roll, moebius, torus, hyperbolic")
      ->required();
  s->add_option("--d", synth.d, "Intrinsic dimension")->required();
  s->add_option("--p", synth.p, "Ambient dimension")->required();
  s->add_option("--n", synth.n, "Number of points")->capture_default_str();
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--noise", synth.noise, "Gaussian noise standard deviation")->capture_default_str();
  s->add_flag("--no-rotate", synth.no_rotate, "Keep the axis-aligned zero-padded embedding");
  s->add_option("--param", synth.params, "Manifold parameter key=value (R, r, c, variance)");
  s->add_option("--out", synth.out, "Output CSV (default: stdout)");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate the intrinsic dimension of a CSV point cloud");
  e->add_option("--in", est.in, "Input CSV, one point per row")->required();
  e->add_option("--method", est.method, "qe, tls, local-pca or twonn")->capture_default_str();
  e->add_option("--k", est.k, "Neighborhood size")->capture_default_str();
  e->add_option("--k-grid", est.k_grid, "K sweep, start:stop:step or a comma list");
  e->add_option("--window", est.window, "Stability window width")->capture_default_str();
  e->add_option("--alpha", est.alpha, "Significance level")->capture_default_str();
  e->add_option("--cutoff", est.cutoff, "Stability cutoff")->capture_default_str();
  e->add_flag("--header", est.header, "Skip the first CSV row");
  e->add_option("--out", est.out, "Output JSON (default: stdout)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a replicated benchmark from a JSON config");
  b->add_option("--config", bench.config, "Benchmark configuration JSON")->required();
  b->add_option("--out", bench.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (s->parsed()) return run_synth(synth);
    if (e->parsed()) return run_estimate(est);
    return run_bench(bench);
  } catch (const graphdim::InvalidParameter& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const graphdim::InvalidSpec& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const graphdim::ParseError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return kData;
  } catch (const graphdim::IoError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return kData;
  } catch (const graphdim::InvalidInput& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return kData;
  } catch (const graphdim::EstimationFailed& err) {
    std::cerr << "estimation failed: " << err.what() << "\n";
    return kEstimation;
  } catch (const graphdim::DegenerateNeighborhood& err) {
    std::cerr << "estimation failed: " << err.what() << "\n";
    return kEstimation;
  }
}
