// Samples peaks twice, with and without output noise, and prints how the adaptive
// points spread out. Usage: peaks_contrast [budget] [seed]
#include <cstdio>
#include <cstdlib>

#include "flola/flola.hpp"

int main(int argc, char** argv) {
  const std::size_t budget = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 120;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  for (double lambda : {0.0, 1.0}) {
    flola::SamplerConfig cfg(flola::peaks_domain());
    cfg.budget = budget;
    cfg.seed = seed;
    cfg.noise_lambda = lambda;
    auto f = flola::make_evaluator("peaks", lambda, seed);
    const auto result = flola::run(cfg, f);
    const auto spacing = flola::nn_distance_stats(result.design());
    std::printf("lambda=%g  points=%zu  inside [-2,2]^2: %.3f  nn mean %.4f  nn cv %.4f\n", lambda,
                result.design().size(), flola::region_fraction(result.design(), flola::peaks_nonlinear_region()),
                spacing.mean, spacing.cv);
  }
  return 0;
}
