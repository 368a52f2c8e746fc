#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "flola/error.hpp"
#include "flola/random.hpp"

// Noise analysis for the exploitation score.
//
// Responses are y_i = f(p_i) + eps_i with eps_i ~ N(0, lambda); lambda is a variance
// everywhere in this header. The score of a point p_r with T neighbors picks up the
// noise sum X = sum_i |eps_i - eps_r|, where each term is folded normal.
//
// expected_noise_sum_formula / variance_noise_sum_formula evaluate the printed closed
// forms exactly as printed. They do not agree with simulate_noise_sum: by linearity
// E[X] = T * 2 sqrt(lambda / pi), and the printed variance subtracts E[X] rather than
// E[X]^2. Both routes are kept so the gap stays visible (see `flola noise-report`).

namespace flola {

inline void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("noise level lambda must be a finite non-negative variance");
}

struct ZetaStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of zeta = |eps_i - eps_r|: mean 2 sqrt(lambda/pi), variance 2 lambda (1 - 2/pi).
inline ZetaStats zeta_stats(double lambda) {
  check_lambda(lambda);
  using std::numbers::pi;
  return {2.0 * std::sqrt(lambda / pi), 2.0 * lambda * (1.0 - 2.0 / pi)};
}

inline double u_of(std::size_t t) {
  const double x = static_cast<double>(t) - 1.0;
  return x * x + 1.0;
}

inline double v_of(std::size_t t) {
  const double x = static_cast<double>(t);
  return x * x - 2.0 * x + 2.0;
}

inline void check_t(std::size_t t) {
  if (t == 0) throw DomainError("neighborhood size T must be at least 1");
}

/// E[X] = (2/pi) sqrt(lambda (pi - 2)) (T + (T - 1) sqrt(u(T))), as printed.
inline double expected_noise_sum_formula(std::size_t t, double lambda) {
  check_t(t);
  check_lambda(lambda);
  using std::numbers::pi;
  const double tt = static_cast<double>(t);
  return 2.0 / pi * std::sqrt(lambda * (pi - 2.0)) * (tt + (tt - 1.0) * std::sqrt(u_of(t)));
}

/// Var[X] = 2 lambda (pi - 2) (4 (T - 1) + 5 pi v(T)) / pi^2 - E[X], as printed.
inline double variance_noise_sum_formula(std::size_t t, double lambda) {
  check_t(t);
  check_lambda(lambda);
  using std::numbers::pi;
  const double tt = static_cast<double>(t);
  return 2.0 * lambda * (pi - 2.0) * (4.0 * (tt - 1.0) + 5.0 * pi * v_of(t)) / (pi * pi) -
         expected_noise_sum_formula(t, lambda);
}

/// Monte-Carlo moments of X, with standard errors of both estimates.
struct NoiseSumStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  std::size_t t = 0;
  double lambda = 0.0;
  std::size_t draws = 0;
};

/// Draws X = sum_{i=1..T} |eps_i - eps_r| with one shared eps_r per draw.
inline NoiseSumStats simulate_noise_sum(std::size_t t, double lambda, std::size_t draws,
                                        std::uint64_t seed) {
  check_t(t);
  check_lambda(lambda);
  if (draws == 0) throw UsageError("simulate_noise_sum needs at least one draw");

  NoiseSumStats out;
  out.t = t;
  out.lambda = lambda;
  out.draws = draws;
  if (lambda == 0.0) return out;

  Rng rng(seed);
  std::normal_distribution<double> eps(0.0, std::sqrt(lambda));
  std::vector<double> x(draws);
  for (double& xs : x) {
    const double eps_r = eps(rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < t; ++i) sum += std::abs(eps(rng) - eps_r);
    xs = sum;
  }

  const double n = static_cast<double>(draws);
  double mean = 0.0;
  for (double xs : x) mean += xs;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double xs : x) {
    const double c = (xs - mean) * (xs - mean);
    m2 += c;
    m4 += c * c;
  }
  out.mean = mean;
  if (draws > 1) {
    out.variance = m2 / (n - 1.0);
    out.mean_stderr = std::sqrt(out.variance / n);
    // Var(s^2) ~ (mu4 - sigma^4) / n for large n.
    const double mu2 = m2 / n;
    const double mu4 = m4 / n;
    out.variance_stderr = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
  }
  return out;
}

/// value + eps with eps ~ N(0, lambda).
template <class UniformRandomBitGenerator>
double add_noise(double value, double lambda, UniformRandomBitGenerator& rng) {
  check_lambda(lambda);
  if (lambda == 0.0) return value;
  std::normal_distribution<double> eps(0.0, std::sqrt(lambda));
  return value + eps(rng);
}

}  // namespace flola
