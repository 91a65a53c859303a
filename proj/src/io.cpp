#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "graphdim/error.hpp"
#include "graphdim/harness.hpp"

namespace graphdim {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

PointCloud parse_cloud_csv(const std::string& text, CsvOptions opts) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = opts.header;

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }

    std::size_t field_count = 0;
    std::size_t fpos = 0;
    while (true) {
      const auto comma = line.find(',', fpos);
      const auto end = comma == std::string_view::npos ? line.size() : comma;
      const std::string_view field = trim(line.substr(fpos, end - fpos));
      ++field_count;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError(where(line_no, field_count) + ": not a number: '" + std::string(field) +
                         "'");
      if (!std::isfinite(v))
        throw ParseError(where(line_no, field_count) + ": non-finite value");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      fpos = comma + 1;
    }
    if (rows == 0) {
      cols = field_count;
    } else if (field_count != cols) {
      throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                       " fields, found " + std::to_string(field_count));
    }
    ++rows;
  }

  if (rows == 0) throw ParseError("row 1: empty file");
  if (rows < 2) throw ParseError("need at least 2 points, found " + std::to_string(rows));
  if (cols < 2) throw ParseError("need at least 2 coordinates per point, found 1");
  Matrix m(rows, cols);
  m.data() = std::move(values);
  return PointCloud(std::move(m));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

PointCloud load_cloud(const std::filesystem::path& path, CsvOptions opts) {
  const std::string text = read_text(path);
  try {
    return parse_cloud_csv(text, opts);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_cloud_csv(const PointCloud& cloud) {
  std::string out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto x = cloud.point(i);
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (c) out += ',';
      out += format_double(x[c]);
    }
    out += '\n';
  }
  return out;
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  write_text(path, format_cloud_csv(cloud));
}

// ---- results -----------------------------------------------------------------

std::string results_to_csv(const std::vector<RunResult>& results) {
  std::string out = "manifold,method,K,mean,std,stable,window\n";
  for (const auto& r : results) {
    const std::string prefix = r.manifold + "," + std::string(method_name(r.method)) + ",";
    for (const auto& ks : r.per_k)
      out += prefix + std::to_string(ks.k) + "," + format_double(ks.mean) + "," +
             format_double(ks.std) + ",,\n";
    if (r.stability) {
      const auto& s = *r.stability;
      out += prefix + "," + format_double(s.mean) + "," + format_double(s.std) + "," +
             (s.stable ? "true" : "false") + "," + std::to_string(s.k_first) + "-" +
             std::to_string(s.k_last) + "\n";
    } else {
      out += prefix + ",nan,nan,false,\n";
    }
  }
  return out;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

json results_to_json(const std::vector<RunResult>& results, bool with_timing) {
  json arr = json::array();
  for (const auto& r : results) {
    json jr;
    jr["manifold"] = r.manifold;
    jr["method"] = std::string(method_name(r.method));
    json per_k = json::array();
    for (const auto& ks : r.per_k) {
      json e;
      e["K"] = ks.k;
      e["estimates"] = ks.estimates;
      e["failures"] = ks.failures;
      e["mean"] = number_or_null(ks.mean);
      e["std"] = number_or_null(ks.std);
      per_k.push_back(std::move(e));
    }
    jr["per_k"] = std::move(per_k);
    if (r.stability) {
      const auto& s = *r.stability;
      jr["stability"] = {{"k_first", s.k_first}, {"k_last", s.k_last}, {"mean", s.mean},
                         {"std", s.std},         {"stable", s.stable}};
    } else {
      jr["stability"] = nullptr;
    }
    if (with_timing) jr["wall_seconds"] = r.wall_seconds;
    arr.push_back(std::move(jr));
  }
  return json{{"results", std::move(arr)}};
}

std::vector<RunResult> results_from_json(const json& j) {
  std::vector<RunResult> out;
  try {
    for (const auto& jr : j.at("results")) {
      RunResult r;
      r.manifold = jr.at("manifold").get<std::string>();
      r.method = parse_method(jr.at("method").get<std::string>());
      for (const auto& e : jr.at("per_k")) {
        KStat ks;
        ks.k = e.at("K").get<std::size_t>();
        ks.estimates = e.at("estimates").get<std::vector<double>>();
        ks.failures = e.at("failures").get<std::size_t>();
        ks.mean = number_from(e.at("mean"));
        ks.std = number_from(e.at("std"));
        r.per_k.push_back(std::move(ks));
      }
      if (const auto& s = jr.at("stability"); !s.is_null()) {
        r.stability = StabilityResult{s.at("k_first").get<std::size_t>(),
                                      s.at("k_last").get<std::size_t>(), s.at("mean").get<double>(),
                                      s.at("std").get<double>(), s.at("stable").get<bool>()};
      }
      if (jr.contains("wall_seconds")) r.wall_seconds = jr["wall_seconds"].get<double>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what());
  }
  return out;
}

void write_results(const std::vector<RunResult>& results, const std::filesystem::path& path,
                   ResultFormat format) {
  if (format == ResultFormat::csv)
    write_text(path, results_to_csv(results));
  else
    write_text(path, results_to_json(results).dump(2) + "\n");
}

// ---- benchmark configuration ---------------------------------------------------

BenchConfig bench_config_from_json(const json& j) {
  BenchConfig cfg;
  try {
    if (!j.is_object()) throw ParseError("bench config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      static const char* known[] = {"manifolds",   "methods",        "n",
                                    "replicates",  "k_grid",         "window",
                                    "master_seed", "noise_sigma",    "embed_rotation",
                                    "stability_cutoff", "estimator"};
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) throw ParseError("unknown bench config key '" + key + "'");
    }
    for (const auto& jm : j.at("manifolds")) {
      ManifoldEntry m;
      m.spec.kind = parse_kind(jm.at("kind").get<std::string>());
      m.spec.d = jm.at("d").get<std::size_t>();
      m.spec.p = jm.at("p").get<std::size_t>();
      if (jm.contains("params")) m.spec.params = jm["params"].get<std::map<std::string, double>>();
      m.id = jm.value("id", std::string(kind_name(m.spec.kind)) + "_d" +
                                std::to_string(m.spec.d) + "_p" + std::to_string(m.spec.p));
      cfg.manifolds.push_back(std::move(m));
    }
    for (const auto& jm : j.at("methods")) cfg.methods.push_back(parse_method(jm.get<std::string>()));
    cfg.n = j.value("n", cfg.n);
    cfg.replicates = j.value("replicates", cfg.replicates);
    const auto& grid = j.at("k_grid");
    if (grid.is_string())
      cfg.k_grid = parse_k_grid(grid.get<std::string>());
    else
      cfg.k_grid = grid.get<std::vector<std::size_t>>();
    cfg.window = j.value("window", cfg.window);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
    cfg.embed_rotation = j.value("embed_rotation", cfg.embed_rotation);
    cfg.stability_cutoff = j.value("stability_cutoff", cfg.stability_cutoff);
    if (j.contains("estimator")) {
      const auto& je = j["estimator"];
      cfg.estimator.alpha = je.value("alpha", cfg.estimator.alpha);
      cfg.estimator.rel_tol = je.value("rel_tol", cfg.estimator.rel_tol);
      cfg.estimator.pca_alpha = je.value("pca_alpha", cfg.estimator.pca_alpha);
      cfg.estimator.twonn_trim = je.value("twonn_trim", cfg.estimator.twonn_trim);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed bench config: ") + e.what());
  }
  return cfg;
}

json bench_config_to_json(const BenchConfig& cfg) {
  json j;
  json ms = json::array();
  for (const auto& m : cfg.manifolds) {
    json jm{{"id", m.id},
            {"kind", std::string(kind_name(m.spec.kind))},
            {"d", m.spec.d},
            {"p", m.spec.p}};
    if (!m.spec.params.empty()) jm["params"] = m.spec.params;
    ms.push_back(std::move(jm));
  }
  j["manifolds"] = std::move(ms);
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(method_name(m)));
  j["methods"] = std::move(methods);
  j["n"] = cfg.n;
  j["replicates"] = cfg.replicates;
  j["k_grid"] = cfg.k_grid;
  j["window"] = cfg.window;
  j["master_seed"] = cfg.master_seed;
  j["noise_sigma"] = cfg.noise_sigma;
  j["embed_rotation"] = cfg.embed_rotation;
  j["stability_cutoff"] = cfg.stability_cutoff;
  j["estimator"] = {{"alpha", cfg.estimator.alpha},
                    {"rel_tol", cfg.estimator.rel_tol},
                    {"pca_alpha", cfg.estimator.pca_alpha},
                    {"twonn_trim", cfg.estimator.twonn_trim}};
  return j;
}

}  // namespace graphdim
