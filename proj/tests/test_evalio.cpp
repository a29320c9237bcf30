#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "netest/config.hpp"
#include "netest/evalio.hpp"
#include "oracles.hpp"

using namespace netest;

namespace {

SweepSpec small_denoise_sweep() {
  SweepSpec s;
  s.scheme = Scheme::Denoise;
  s.generator.kind = GeneratorKind::RandomComplete;
  s.generator.n = 12;
  s.metric_sets = {{"degree", {MetricKind::Degree}, {}, std::nullopt},
                   {"transitivity", {MetricKind::Transitivity}, {}, 0.05}};
  s.sweep_var = SweepVar::Sigma;
  s.sweep_values = {0.2, 0.6};
  s.realizations = 3;
  s.base_seed = 17;
  s.descent.max_iters = 300;
  return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected netest::Error";
  return ErrorCode::IoFailure;
}

}  // namespace

TEST(ErrorReduction, Examples) {
  const Matrix truth = oracle::random_symmetric(6, 1);
  const Matrix ref = oracle::random_symmetric(6, 2);
  EXPECT_EQ(error_reduction(truth, truth, ref), 1.0);
  EXPECT_EQ(error_reduction(ref, truth, ref), 0.0);
  EXPECT_NEAR(error_reduction(truth + 2.0 * (ref - truth), truth, ref), -1.0, 1e-12);
  EXPECT_EQ(code_of([&] { error_reduction(ref, truth, truth); }), ErrorCode::ZeroReferenceError);

  EXPECT_EQ(decomposition_reduction(truth, ref, truth), 1.0);
  EXPECT_EQ(decomposition_reduction(ref, ref, truth), 0.0);
}

TEST(Mse, Examples) {
  const Matrix a = oracle::random_symmetric(7, 3);
  EXPECT_EQ(mse(a, a), 0.0);
  EXPECT_EQ(mse(Matrix::Zero(2, 2), hollow_ones(2)), 1.0);
  const Matrix b = oracle::random_symmetric(7, 4);
  double s = 0.0;
  for (Index i = 0; i < 7; ++i)
    for (Index j = 0; j < 7; ++j)
      if (i != j) s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  EXPECT_NEAR(mse(a, b), s / 42.0, 1e-15);
  EXPECT_THROW(mse(a, Matrix::Zero(3, 3)), Error);
}

TEST(Sweep, DeterministicAndThreadIndependent) {
  SweepSpec s = small_denoise_sweep();
  const std::string first = format_sweep_csv(run_sweep(s));
  EXPECT_EQ(first, format_sweep_csv(run_sweep(s)));
  s.threads = 3;
  EXPECT_EQ(first, format_sweep_csv(run_sweep(s)));
  s.base_seed = 18;
  EXPECT_NE(first, format_sweep_csv(run_sweep(s)));
}

TEST(Sweep, TableLayout) {
  const auto rows = run_sweep(small_denoise_sweep());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].metric_set, "degree");
  EXPECT_EQ(rows[1].metric_set, "transitivity");
  EXPECT_EQ(rows[2].sweep_value, 0.6);
  for (const auto& r : rows) {
    EXPECT_EQ(r.realizations, 3);
    EXPECT_GE(r.std_er, 0.0);
  }
  const std::string csv = format_sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sweep_value,metric_set,mean_er,std_er,realizations");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 11), "0.2,degree,");
}

TEST(Sweep, DegreeDenoisingHelps) {
  SweepSpec s = small_denoise_sweep();
  s.metric_sets.resize(1);
  s.generator.n = 16;
  s.descent.max_iters = 5000;
  for (const auto& row : run_sweep(s)) EXPECT_GT(row.mean_er, 0.0);
}

TEST(Sweep, OneRealizationHasZeroSpread) {
  SweepSpec s = small_denoise_sweep();
  s.realizations = 1;
  for (const auto& row : run_sweep(s)) EXPECT_EQ(row.std_er, 0.0);
}

TEST(Sweep, CompletionAndDecompositionSchemes) {
  SweepSpec c;
  c.scheme = Scheme::Complete;
  c.generator.n = 12;
  c.metric_sets = {{"deg", {MetricKind::Degree}, {}, std::nullopt}};
  c.sweep_var = SweepVar::MissingFrac;
  c.sweep_values = {0.2};
  c.realizations = 2;
  c.descent.max_iters = 200;
  EXPECT_EQ(run_sweep(c).size(), 1u);
  c.sweep_values = {0.0};
  EXPECT_EQ(code_of([&] { run_sweep(c); }), ErrorCode::EmptyMask);

  SweepSpec d;
  d.scheme = Scheme::Decompose;
  d.generator = {GeneratorKind::Modular, 16, 0, 5.0, 4, 0.9};
  d.second_generator = GeneratorSpec{GeneratorKind::ScaleFree, 16, 0, 5.0, 8, 0.9};
  d.metric_sets = {{"mod_trans", {MetricKind::Modularity}, {MetricKind::Transitivity}, std::nullopt}};
  d.sweep_var = SweepVar::N;
  d.sweep_values = {16};
  d.realizations = 2;
  d.descent.max_iters = 100;
  d.decomposition.outer_max = 3;
  const auto rows = run_sweep(d);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(std::isfinite(rows[0].mean_er));
}

TEST(Sweep, RejectsBadSpecs) {
  SweepSpec s = small_denoise_sweep();
  s.sweep_values = {0.6, 0.2};
  EXPECT_THROW(run_sweep(s), Error);
  s = small_denoise_sweep();
  s.realizations = 0;
  EXPECT_THROW(run_sweep(s), Error);
  s = small_denoise_sweep();
  s.scheme = Scheme::Decompose;
  EXPECT_THROW(run_sweep(s), Error);
}

TEST(Output, TraceAndSummary) {
  std::vector<TraceRecord> trace = {{0, 2.5, {}, std::nullopt, 0.75}, {100, 0.5, {}, 0.125, std::nullopt}};
  EXPECT_EQ(format_trace_csv(trace), "iter,cost,recon_error,dist_to_truth\n0,2.5,,0.75\n100,0.5,0.125,\n");
  FitResult fit{validate(Matrix::Zero(2, 2)), {}, true, 42, 1e-9};
  EXPECT_EQ(format_summary(fit), "converged: true\niterations: 42\nfinal_cost: 1.0000000000000001e-09\n");
}

TEST(Config, TargetsRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "netest_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "mods.txt") << "1\n1\n2\n2\n";
  std::ofstream(dir / "targets.json")
      << R"({"targets": [{"kind": "degree", "node": 2, "target": 1.5},
                         {"kind": "transitivity", "target": 0.4},
                         {"kind": "modularity", "modules": "mods.txt", "target": 0.1}]})";
  const auto specs = config::load_targets(dir / "targets.json");
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(*specs[0].node, 1);
  EXPECT_EQ(specs[1].kind, MetricKind::Transitivity);
  EXPECT_EQ(specs[2].modules->modules(), (std::vector<int>{1, 1, 2, 2}));

  const auto again = config::parse_targets(config::format_targets(specs, "mods.txt"), dir);
  ASSERT_EQ(again.size(), 3u);
  EXPECT_EQ(again[0].node, specs[0].node);
  EXPECT_EQ(again[2].target, 0.1);

  EXPECT_EQ(code_of([] { config::parse_targets("{"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { config::parse_targets(R"({"targets": [{"kind": "degree"}]})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { config::parse_targets(R"({"targets": [{"kind": "pagerank", "target": 1}]})"); }),
            ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([] { config::parse_targets(R"({"targets": [{"kind": "degree", "node": 0, "target": 1}]})"); }),
            ErrorCode::InvalidSpec);
}

TEST(Config, SweepFile) {
  const SweepSpec s = config::parse_sweep(R"({
    "scheme": "complete",
    "generator": {"kind": "random", "n": 32},
    "metric_sets": [{"name": "all", "metrics": ["degree", "transitivity", "global_clustering"], "mu": 0.01}],
    "sweep_var": "missing_frac",
    "sweep_values": [0.1, 0.2, 0.3],
    "realizations": 20,
    "base_seed": 5,
    "descent": {"max_iters": 2000}
  })");
  EXPECT_EQ(s.scheme, Scheme::Complete);
  EXPECT_EQ(s.generator.n, 32);
  EXPECT_EQ(s.metric_sets[0].metrics.size(), 3u);
  EXPECT_EQ(*s.metric_sets[0].mu, 0.01);
  EXPECT_EQ(s.sweep_values.size(), 3u);
  EXPECT_EQ(s.realizations, 20);
  EXPECT_EQ(s.descent.max_iters, 2000);
  EXPECT_EQ(s.descent.mu, 1e-3);

  EXPECT_EQ(code_of([] { config::parse_sweep(R"({"scheme": "denoise"})"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              config::parse_sweep(R"({"scheme": "denoise", "generator": {"kind": "random", "n": 8},
                "metric_sets": [{"name": "d", "metrics": ["degree"]}], "sweep_var": "sigma", "sweep_values": []})");
            }),
            ErrorCode::InvalidParams);
}
