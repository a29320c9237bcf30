// Denoise a noisy random network using the degrees of the clean one.
//
//   denoise_demo [n] [sigma] [seed]

#include <cstdio>
#include <cstdlib>

#include "netest/netest.hpp"

using namespace netest;

int main(int argc, char** argv) {
  const Index n = argc > 1 ? std::atol(argv[1]) : 64;
  const double sigma = argc > 2 ? std::atof(argv[2]) : 0.5;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  try {
    const WeightMatrix truth = random_complete(n, derive_seed(seed, 0, 0, 1));
    const WeightMatrix noisy = add_noise(truth, sigma, derive_seed(seed, 0, 0, 2));
    const auto targets = targets_from(truth, {MetricKind::Degree});

    DescentConfig cfg;
    cfg.log_every = 100;
    const FitResult fit = denoise(noisy, targets, cfg);

    for (const auto& rec : fit.trace) std::printf("iter %6ld  cost %.3e\n", rec.iter, rec.cost);
    std::printf("converged %s after %ld iterations\n", fit.converged ? "yes" : "no", fit.iters);
    std::printf("distance to truth: noisy %.4f, denoised %.4f\n", frobenius_distance(noisy, truth),
                frobenius_distance(fit.w_hat, truth));
    std::printf("error reduction %.4f\n", error_reduction(fit.w_hat, truth, noisy));
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
