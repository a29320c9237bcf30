#pragma once

// JSON configuration files shared by the library and the CLI.
//
// Targets file:
//   {"targets": [
//      {"kind": "degree", "node": 3, "target": 4.2},          // node is 1-based
//      {"kind": "transitivity", "target": 0.31},
//      {"kind": "modularity", "modules": "mods.txt", "target": 0.42}
//   ]}
// A relative "modules" path is resolved against the targets file directory.
//
// Sweep file: see SweepSpec; every key except scheme, generator,
// metric_sets, sweep_var and sweep_values is optional.
//   {"scheme": "denoise" | "decompose" | "complete",
//    "generator": {"kind": "random" | "scale_free" | "modular", "n": 128,
//                  "avg_degree": 5, "modules": 8, "in_module_frac": 0.9},
//    "second_generator": {...},
//    "metric_sets": [{"name": "degree", "metrics": ["degree"],
//                     "second": [...], "mu": 0.001}],
//    "sweep_var": "sigma" | "n" | "missing_frac",
//    "sweep_values": [0.1, 0.2],
//    "realizations": 10, "base_seed": 1, "threads": 1,
//    "sigma": 0.5, "missing_frac": 0.1, "w_init": 0.5,
//    "descent": {"mu": 0.001, "eps": 1e-8, "max_iters": 50000},
//    "decomposition": {"lambda0": 0.1, "lambda_growth": 1.05,
//                      "outer_max": 100, "recon_eps": 1e-6}}

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "netest/evalio.hpp"
#include "netest/io.hpp"

namespace netest::config {

using nlohmann::json;

namespace detail {

inline json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, what + ": " + e.what());
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& what) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, what + ": key '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& what) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, what);
}

}  // namespace detail

inline std::vector<MetricSpec> parse_targets(std::string_view text, const std::filesystem::path& base_dir = {}) {
  const json doc = detail::parse_json(text, "targets");
  if (!doc.contains("targets") || !doc["targets"].is_array()) {
    throw Error(ErrorCode::ParseError, "targets: expected an object with a 'targets' array");
  }
  std::vector<MetricSpec> specs;
  for (const auto& item : doc["targets"]) {
    if (!item.is_object()) throw Error(ErrorCode::ParseError, "targets: entries must be objects");
    MetricSpec spec;
    spec.kind = parse_metric_kind(detail::get<std::string>(item, "kind", "targets"));
    spec.target = detail::get<double>(item, "target", "targets");
    if (item.contains("node")) {
      const long node = detail::get<long>(item, "node", "targets");
      if (node < 1) throw Error(ErrorCode::InvalidSpec, "targets: node indices are 1-based");
      spec.node = node - 1;
    }
    if (item.contains("modules")) {
      std::filesystem::path p = detail::get<std::string>(item, "modules", "targets");
      if (p.is_relative()) p = base_dir / p;
      spec.modules = io::load_modules(p);
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

inline std::vector<MetricSpec> load_targets(const std::filesystem::path& path) {
  return parse_targets(io::read_text(path), path.parent_path());
}

inline std::string format_targets(const std::vector<MetricSpec>& specs, const std::string& modules_path = {}) {
  json arr = json::array();
  for (const auto& s : specs) {
    json item;
    item["kind"] = std::string(metric_name(s.kind));
    if (s.node) item["node"] = *s.node + 1;
    if (s.modules && !modules_path.empty()) item["modules"] = modules_path;
    item["target"] = s.target;
    arr.push_back(std::move(item));
  }
  return json{{"targets", arr}}.dump(2) + "\n";
}

inline GeneratorSpec parse_generator(const json& obj) {
  const std::string what = "generator";
  GeneratorSpec g;
  g.kind = parse_generator_kind(detail::get<std::string>(obj, "kind", what));
  g.n = detail::get_or<long>(obj, "n", 0, what);
  g.seed = detail::get_or<std::uint64_t>(obj, "seed", 0, what);
  g.avg_degree = detail::get_or<double>(obj, "avg_degree", g.avg_degree, what);
  g.modules = detail::get_or<int>(obj, "modules", g.modules, what);
  g.in_module_frac = detail::get_or<double>(obj, "in_module_frac", g.in_module_frac, what);
  return g;
}

inline std::vector<MetricKind> parse_kinds(const json& arr) {
  std::vector<MetricKind> kinds;
  for (const auto& k : arr) {
    if (!k.is_string()) throw Error(ErrorCode::ParseError, "metric names must be strings");
    kinds.push_back(parse_metric_kind(k.get<std::string>()));
  }
  return kinds;
}

inline SweepSpec parse_sweep_document(const json& doc) {
  const std::string what = "sweep";
  SweepSpec s;

  const auto scheme = detail::get<std::string>(doc, "scheme", what);
  if (scheme == "denoise") s.scheme = Scheme::Denoise;
  else if (scheme == "decompose") s.scheme = Scheme::Decompose;
  else if (scheme == "complete") s.scheme = Scheme::Complete;
  else throw Error(ErrorCode::ParseError, "sweep: unknown scheme '" + scheme + "'");

  s.generator = parse_generator(doc.at("generator"));
  if (doc.contains("second_generator")) s.second_generator = parse_generator(doc["second_generator"]);

  if (!doc.contains("metric_sets") || !doc["metric_sets"].is_array()) {
    throw Error(ErrorCode::ParseError, "sweep: 'metric_sets' must be an array");
  }
  for (const auto& item : doc["metric_sets"]) {
    MetricSet set;
    set.name = detail::get<std::string>(item, "name", what);
    set.metrics = parse_kinds(item.at("metrics"));
    if (item.contains("second")) set.second = parse_kinds(item["second"]);
    if (item.contains("mu")) set.mu = detail::get<double>(item, "mu", what);
    s.metric_sets.push_back(std::move(set));
  }

  const auto var = detail::get<std::string>(doc, "sweep_var", what);
  if (var == "sigma") s.sweep_var = SweepVar::Sigma;
  else if (var == "n") s.sweep_var = SweepVar::N;
  else if (var == "missing_frac") s.sweep_var = SweepVar::MissingFrac;
  else throw Error(ErrorCode::ParseError, "sweep: unknown sweep_var '" + var + "'");

  s.sweep_values = detail::get<std::vector<double>>(doc, "sweep_values", what);
  s.realizations = detail::get_or<int>(doc, "realizations", s.realizations, what);
  s.base_seed = detail::get_or<std::uint64_t>(doc, "base_seed", s.base_seed, what);
  s.threads = detail::get_or<unsigned>(doc, "threads", s.threads, what);
  s.sigma = detail::get_or<double>(doc, "sigma", s.sigma, what);
  s.missing_frac = detail::get_or<double>(doc, "missing_frac", s.missing_frac, what);
  s.w_init = detail::get_or<double>(doc, "w_init", s.w_init, what);

  if (doc.contains("descent")) {
    const auto& d = doc["descent"];
    s.descent.mu = detail::get_or<double>(d, "mu", s.descent.mu, what);
    s.descent.eps = detail::get_or<double>(d, "eps", s.descent.eps, what);
    s.descent.max_iters = detail::get_or<long>(d, "max_iters", s.descent.max_iters, what);
  }
  if (doc.contains("decomposition")) {
    const auto& d = doc["decomposition"];
    s.decomposition.lambda0 = detail::get_or<double>(d, "lambda0", s.decomposition.lambda0, what);
    s.decomposition.lambda_growth = detail::get_or<double>(d, "lambda_growth", s.decomposition.lambda_growth, what);
    s.decomposition.outer_max = detail::get_or<long>(d, "outer_max", s.decomposition.outer_max, what);
    s.decomposition.recon_eps = detail::get_or<double>(d, "recon_eps", s.decomposition.recon_eps, what);
  }
  s.check();
  return s;
}

inline SweepSpec parse_sweep(std::string_view text) {
  const json doc = detail::parse_json(text, "sweep");
  try {
    return parse_sweep_document(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sweep: ") + e.what());
  }
}

inline SweepSpec load_sweep(const std::filesystem::path& path) { return parse_sweep(io::read_text(path)); }

}  // namespace netest::config
