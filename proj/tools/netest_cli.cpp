// netest command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netest/netest.hpp"

namespace fs = std::filesystem;
using namespace netest;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kValidation = 3, kNumerical = 4, kIo = 5 };

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Validation: return kValidation;
    case ErrorCategory::Numerical: return kNumerical;
    case ErrorCategory::Io: return kIo;
  }
  return kValidation;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<MetricKind> parse_kind_list(const std::string& s) {
  std::vector<MetricKind> kinds;
  for (const auto& name : split_list(s)) kinds.push_back(parse_metric_kind(name));
  if (kinds.empty()) throw Error(ErrorCode::InvalidSpec, "empty metric list");
  return kinds;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct MatrixInput {
  std::string path;
  bool edges = false;
  long n = 0;

  void add(CLI::App* app, const std::string& flag, const std::string& what, bool required = true) {
    auto* opt = app->add_option(flag, path, what + " (dense CSV, or edge list with --edges)");
    if (required) opt->required();
    app->add_flag("--edges", edges, "read inputs as 1-based 'i j w' edge lists");
    app->add_option("--nodes", n, "node count for edge-list inputs (default: largest index)");
  }

  Matrix raw(const std::string& p) const {
    const std::string text = io::read_text(p);
    if (edges) return io::parse_edge_list(text, n > 0 ? std::optional<Index>(n) : std::nullopt);
    return io::parse_csv_matrix(text);
  }
  WeightMatrix load(const std::string& p) const { return validate(raw(p)); }
  WeightMatrix load() const { return load(path); }
};

struct TargetInput {
  std::string targets;
  std::string reference;
  std::string metrics;
  std::string modules;

  void add(CLI::App* app, const std::string& suffix = "") {
    auto* t = app->add_option("--targets" + suffix, targets, "JSON targets file");
    auto* r = app->add_option("--targets-from" + suffix, reference, "reference matrix to compute targets from");
    app->add_option("--metrics" + suffix, metrics, "comma-separated metrics for --targets-from" + suffix)
        ->needs(r);
    app->add_option("--modules" + suffix, modules, "module assignment file for modularity targets");
    t->excludes(r);
  }

  std::vector<MetricSpec> load(const MatrixInput& in, const std::string& suffix = "") const {
    if (!targets.empty()) return config::load_targets(targets);
    if (reference.empty()) {
      throw Error(ErrorCode::InvalidSpec, "give --targets" + suffix + " or --targets-from" + suffix);
    }
    if (metrics.empty()) throw Error(ErrorCode::InvalidSpec, "--targets-from" + suffix + " needs --metrics" + suffix);
    std::optional<ModuleAssignment> mods;
    if (!modules.empty()) mods = io::load_modules(modules);
    return targets_from(in.load(reference), parse_kind_list(metrics), mods);
  }
};

void add_descent_options(CLI::App* app, DescentConfig& cfg) {
  app->add_option("--mu", cfg.mu, "learning rate")->capture_default_str();
  app->add_option("--eps", cfg.eps, "stop when the cost falls to this value")->capture_default_str();
  app->add_option("--max-iters", cfg.max_iters, "iteration cap")->capture_default_str();
  app->add_option("--log-every", cfg.log_every, "trace cadence in iterations (0: first and last only)")
      ->capture_default_str();
}

void write_fit(const FitResult& fit, const std::string& out, const std::string& trace, const std::string& summary) {
  io::save_dense(out, fit.w_hat);
  if (!trace.empty()) io::write_text_atomic(trace, format_trace_csv(fit.trace));
  if (!summary.empty()) io::write_text_atomic(summary, format_summary(fit));
  std::cout << format_summary(fit);
}

// ---- generate ----

struct GenerateCmd {
  std::string kind = "random";
  GeneratorSpec spec;
  std::string out, modules_out;
  bool edges_out = false;
  double sigma = -1.0;
  std::uint64_t noise_seed = 0;
  std::string noisy_out;
  double mask_frac = -1.0;
  std::uint64_t mask_seed = 0;
  std::string mask_out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("generate", "generate a synthetic network (optionally a noisy copy and a mask)");
    app->add_option("--kind", kind, "random | scale_free | modular")->capture_default_str();
    app->add_option("--n", spec.n, "node count")->required();
    app->add_option("--seed", spec.seed, "generator seed")->capture_default_str();
    app->add_option("--avg-degree", spec.avg_degree, "scale_free mean degree")->capture_default_str();
    app->add_option("--modules", spec.modules, "modular: module count")->capture_default_str();
    app->add_option("--in-frac", spec.in_module_frac, "modular: fraction of edges inside modules")
        ->capture_default_str();
    app->add_option("--out", out, "output matrix path")->required();
    app->add_option("--modules-out", modules_out, "module assignment output (modular only)");
    app->add_flag("--edges-out", edges_out, "write the matrix as an edge list instead of dense CSV");
    app->add_option("--sigma", sigma, "also write a noisy copy with this noise level");
    app->add_option("--noise-seed", noise_seed, "noise seed")->capture_default_str();
    app->add_option("--noisy-out", noisy_out, "noisy copy output path");
    app->add_option("--mask-frac", mask_frac, "also write a random missing-entry mask with this fraction");
    app->add_option("--mask-seed", mask_seed, "mask seed")->capture_default_str();
    app->add_option("--mask-out", mask_out, "mask output path (0/1 CSV)");
    app->callback([this] { run(); });
  }

  void save(const std::string& path, const Matrix& m) const {
    if (edges_out) io::write_text_atomic(path, io::format_edge_list(m));
    else io::save_dense(path, m);
  }

  void run() {
    spec.kind = parse_generator_kind(kind);
    const GeneratedNetwork g = generate(spec);
    save(out, g.weights);
    if (!modules_out.empty()) {
      if (!g.modules) throw Error(ErrorCode::InvalidParams, "--modules-out needs --kind modular");
      io::write_text_atomic(modules_out, io::format_modules(*g.modules));
    }
    if (sigma >= 0.0) {
      if (noisy_out.empty()) throw Error(ErrorCode::InvalidParams, "--sigma needs --noisy-out");
      save(noisy_out, add_noise(g.weights, sigma, noise_seed));
    }
    if (mask_frac >= 0.0) {
      if (mask_out.empty()) throw Error(ErrorCode::InvalidParams, "--mask-frac needs --mask-out");
      io::write_text_atomic(mask_out, io::format_mask(random_mask(spec.n, mask_frac, mask_seed)));
    }
  }
};

// ---- metrics ----

struct MetricsCmd {
  MatrixInput input;
  std::string metrics;
  std::string modules;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("metrics", "evaluate metrics of a network as CSV metric,node,value");
    input.add(app, "--input", "network");
    app->add_option("--metrics", metrics, "comma-separated metrics (default: all that apply)");
    app->add_option("--modules", modules, "module assignment file (needed for modularity)");
    app->add_option("--out", out, "output CSV (default: stdout)");
    app->callback([this] { run(); });
  }

  void run() {
    const WeightMatrix w = input.load();
    std::optional<ModuleAssignment> mods;
    if (!modules.empty()) mods = io::load_modules(modules);
    std::vector<MetricKind> kinds;
    if (metrics.empty()) {
      for (MetricKind k : kAllMetricKinds)
        if (k != MetricKind::Modularity || mods) kinds.push_back(k);
    } else {
      kinds = parse_kind_list(metrics);
    }
    std::string csv = "metric,node,value\n";
    for (const auto& s : targets_from(w, kinds, mods)) {
      csv += std::string(metric_name(s.kind)) + "," + (s.node ? std::to_string(*s.node + 1) : "") + "," +
             fmt(s.target) + "\n";
    }
    if (out.empty()) std::cout << csv;
    else io::write_text_atomic(out, csv);
  }
};

// ---- gradcheck ----

struct GradcheckCmd {
  std::string metric;
  long node = 0;
  Index n = 8;
  std::uint64_t seed = 0;
  double h = 1e-6;
  double tol = 1e-5;
  MatrixInput input;
  std::string modules;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("gradcheck", "compare analytic gradients with symmetric finite differences");
    app->add_option("--metric", metric, "metric name")->required();
    app->add_option("--node", node, "1-based node for local metrics (default: every node)");
    app->add_option("--n", n, "size of the random test network")->capture_default_str();
    app->add_option("--seed", seed, "seed of the random test network")->capture_default_str();
    app->add_option("--step", h, "finite-difference step")->capture_default_str();
    app->add_option("--tol", tol, "exit 4 if max_rel_err reaches this")->capture_default_str();
    input.add(app, "--input", "network to test at instead of a random one", false);
    app->add_option("--modules", modules, "module assignment (default: two contiguous halves)");
    app->add_option("--out", out, "output CSV (default: stdout)");
    app->callback([this] { run(); });
  }

  void run() {
    const MetricKind kind = parse_metric_kind(metric);
    Matrix w;
    if (!input.path.empty()) {
      w = input.load().matrix();
    } else {
      if (n < 2) throw Error(ErrorCode::InvalidParams, "--n must be at least 2");
      Rng rng(seed);
      w = Matrix::Zero(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = 0.1 + 0.8 * rng.uniform();
    }
    const Index size = w.rows();
    std::optional<ModuleAssignment> mods;
    if (kind == MetricKind::Modularity) {
      if (!modules.empty()) {
        mods = io::load_modules(modules);
      } else {
        std::vector<int> ids(static_cast<std::size_t>(size));
        for (Index i = 0; i < size; ++i) ids[static_cast<std::size_t>(i)] = i < size / 2 ? 1 : 2;
        mods = ModuleAssignment(std::move(ids));
      }
    }
    std::vector<std::optional<Index>> nodes;
    if (!is_local(kind)) nodes.push_back(std::nullopt);
    else if (node > 0) nodes.push_back(node - 1);
    else
      for (Index i = 0; i < size; ++i) nodes.push_back(i);

    std::string csv = "metric,node,max_rel_err,mean_rel_err\n";
    double worst = 0.0;
    for (const auto& i : nodes) {
      const MetricSpec spec{kind, i, mods, 0.0};
      const Matrix analytic = grad(spec, w);
      const Matrix fd = fd_gradient(spec, w, h);
      double max_err = 0.0, sum = 0.0;
      long count = 0;
      for (Index a = 0; a < size; ++a)
        for (Index b = 0; b < size; ++b) {
          if (a == b || std::abs(fd(a, b)) <= 1e-8) continue;
          const double rel = std::abs(analytic(a, b) - fd(a, b)) / std::abs(fd(a, b));
          max_err = std::max(max_err, rel);
          sum += rel;
          ++count;
        }
      worst = std::max(worst, max_err);
      csv += std::string(metric_name(kind)) + "," + (i ? std::to_string(*i + 1) : "") + "," + fmt(max_err) + "," +
             fmt(count ? sum / static_cast<double>(count) : 0.0) + "\n";
    }
    if (out.empty()) std::cout << csv;
    else io::write_text_atomic(out, csv);
    if (!(worst < tol)) {
      throw Error(ErrorCode::NonFiniteCost, "gradient check failed: max_rel_err " + fmt(worst));
    }
  }
};

// ---- denoise / complete ----

struct DenoiseCmd {
  MatrixInput input;
  TargetInput targets;
  DescentConfig cfg;
  std::string truth, out, trace, summary;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("denoise", "denoise a network towards target metric values");
    input.add(app, "--input", "noisy network");
    targets.add(app);
    add_descent_options(app, cfg);
    app->add_option("--truth", truth, "true network; adds dist_to_truth to the trace");
    app->add_option("--out", out, "denoised network output")->required();
    app->add_option("--trace", trace, "trace CSV output");
    app->add_option("--summary", summary, "summary output");
    app->callback([this] { run(); });
  }

  void run() {
    DescentOptions opts;
    if (!truth.empty()) opts.reference = input.load(truth).matrix();
    write_fit(denoise(input.load(), targets.load(input), cfg, opts), out, trace, summary);
  }
};

struct CompleteCmd {
  MatrixInput input;
  TargetInput targets;
  DescentConfig cfg;
  std::string mask;
  double w_init = 0.5;
  std::string truth, out, trace, summary;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("complete", "fill missing entries of a network");
    input.add(app, "--input", "observed network (missing entries may hold any valid value)");
    app->add_option("--mask", mask, "0/1 CSV marking missing entries")->required();
    targets.add(app);
    add_descent_options(app, cfg);
    app->add_option("--w-init", w_init, "starting value for missing entries")->capture_default_str();
    app->add_option("--truth", truth, "true network; adds dist_to_truth to the trace");
    app->add_option("--out", out, "completed network output")->required();
    app->add_option("--trace", trace, "trace CSV output");
    app->add_option("--summary", summary, "summary output");
    app->callback([this] { run(); });
  }

  void run() {
    DescentOptions opts;
    if (!truth.empty()) opts.reference = input.load(truth).matrix();
    write_fit(complete(input.load(), io::load_mask(mask), targets.load(input), w_init, cfg, opts), out, trace,
              summary);
  }
};

// ---- decompose ----

struct DecomposeCmd {
  MatrixInput input;
  TargetInput targets1, targets2;
  DecompositionConfig cfg;
  std::string truth1, truth2, out1, out2, trace1, trace2;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("decompose", "split a mixture W1 + W2 into its two networks");
    input.add(app, "--input", "mixture (entries may exceed 1)");
    targets1.add(app, "1");
    targets2.add(app, "2");
    add_descent_options(app, cfg.inner);
    app->add_option("--lambda0", cfg.lambda0, "initial tether weight")->capture_default_str();
    app->add_option("--lambda-growth", cfg.lambda_growth, "tether growth per outer iteration")
        ->capture_default_str();
    app->add_option("--outer-max", cfg.outer_max, "outer iteration cap")->capture_default_str();
    app->add_option("--recon-eps", cfg.recon_eps, "stop when the reconstruction error falls to this")
        ->capture_default_str();
    app->add_option("--truth1", truth1, "true first network for the trace");
    app->add_option("--truth2", truth2, "true second network for the trace");
    app->add_option("--out1", out1, "first network output")->required();
    app->add_option("--out2", out2, "second network output")->required();
    app->add_option("--trace1", trace1, "first network trace CSV");
    app->add_option("--trace2", trace2, "second network trace CSV");
    app->callback([this] { run(); });
  }

  void run() {
    const Matrix mixture = input.raw(input.path);
    DecompositionReferences refs;
    if (!truth1.empty()) refs.first = input.load(truth1).matrix();
    if (!truth2.empty()) refs.second = input.load(truth2).matrix();
    const DecompositionResult r =
        decompose(mixture, targets1.load(input, "1"), targets2.load(input, "2"), cfg, std::nullopt, refs);
    io::save_dense(out1, r.first.w_hat);
    io::save_dense(out2, r.second.w_hat);
    if (!trace1.empty()) io::write_text_atomic(trace1, format_trace_csv(r.first.trace));
    if (!trace2.empty()) io::write_text_atomic(trace2, format_trace_csv(r.second.trace));
    std::cout << "converged: " << (r.converged ? "true" : "false") << "\nouter_iterations: " << r.outer_iters
              << "\nrecon_error: " << fmt(r.recon_errors.back()) << "\n";
  }
};

// ---- sweep ----

struct SweepCmd {
  std::string config_path, out;
  unsigned threads = 0;
  std::optional<std::uint64_t> base_seed;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("sweep", "run a Monte Carlo sweep described by a JSON config");
    app->add_option("--config", config_path, "sweep config file")->required();
    app->add_option("--out", out, "output CSV (default: stdout)");
    app->add_option("--threads", threads, "worker threads (overrides the config)");
    app->add_option("--base-seed", base_seed, "base seed (overrides the config)");
    app->callback([this] { run(); });
  }

  void run() {
    SweepSpec spec = config::load_sweep(config_path);
    if (threads > 0) spec.threads = threads;
    if (base_seed) spec.base_seed = *base_seed;
    const std::string csv = format_sweep_csv(run_sweep(spec));
    if (out.empty()) std::cout << csv;
    else io::write_text_atomic(out, csv);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network estimation from graph-metric targets"};
  app.require_subcommand(1);
  GenerateCmd generate_cmd;
  MetricsCmd metrics_cmd;
  GradcheckCmd gradcheck_cmd;
  DenoiseCmd denoise_cmd;
  DecomposeCmd decompose_cmd;
  CompleteCmd complete_cmd;
  SweepCmd sweep_cmd;
  generate_cmd.add(app);
  metrics_cmd.add(app);
  gradcheck_cmd.add(app);
  denoise_cmd.add(app);
  decompose_cmd.add(app);
  complete_cmd.add(app);
  sweep_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
