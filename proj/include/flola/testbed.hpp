#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "flola/design.hpp"
#include "flola/error.hpp"
#include "flola/noise.hpp"
#include "flola/random.hpp"

namespace flola {

/// The customary "peaks" surface (as shipped with MATLAB), usually studied on [-3, 3]^2.
inline double peaks(double x, double y) {
  return 3.0 * (1.0 - x) * (1.0 - x) * std::exp(-x * x - (y + 1.0) * (y + 1.0)) -
         10.0 * (x / 5.0 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
         std::exp(-(x + 1.0) * (x + 1.0) - y * y) / 3.0;
}

inline DesignSpace peaks_domain() { return DesignSpace({-3.0, -3.0}, {3.0, 3.0}); }

/// Axis-aligned sub-box of a design space, raw coordinates.
struct Region {
  std::vector<double> lower;
  std::vector<double> upper;

  bool contains(std::span<const double> x) const {
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] < lower[k] || x[k] > upper[k]) return false;
    return true;
  }
};

/// [-2, 2]^2, which holds all three extrema of peaks.
inline Region peaks_nonlinear_region() { return {{-2.0, -2.0}, {2.0, 2.0}}; }

struct FunctionSpec {
  enum class Kind { peaks, linear, quadratic };

  Kind kind = Kind::peaks;
  std::vector<double> coefficients;  // linear: intercept, then one slope per axis
  std::vector<double> matrix;        // quadratic: d x d row-major, f = x^T Q x

  static FunctionSpec make_peaks() { return {Kind::peaks, {}, {}}; }
  static FunctionSpec linear(std::vector<double> c) { return {Kind::linear, std::move(c), {}}; }
  static FunctionSpec quadratic(std::vector<double> q) {
    return {Kind::quadratic, {}, std::move(q)};
  }

  double operator()(std::span<const double> x) const {
    const std::size_t d = x.size();
    switch (kind) {
      case Kind::peaks:
        if (d != 2) throw UsageError("peaks is defined on two inputs");
        return peaks(x[0], x[1]);
      case Kind::linear: {
        if (coefficients.size() != d + 1)
          throw UsageError("linear function needs d + 1 coefficients");
        double y = coefficients[0];
        for (std::size_t k = 0; k < d; ++k) y += coefficients[k + 1] * x[k];
        return y;
      }
      case Kind::quadratic: {
        if (matrix.size() != d * d) throw UsageError("quadratic function needs a d x d matrix");
        double y = 0.0;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) y += x[i] * matrix[i * d + j] * x[j];
        return y;
      }
    }
    throw UsageError("unknown function kind");
  }
};

inline FunctionSpec::Kind parse_function_kind(const std::string& name) {
  if (name == "peaks") return FunctionSpec::Kind::peaks;
  if (name == "linear") return FunctionSpec::Kind::linear;
  if (name == "quadratic") return FunctionSpec::Kind::quadratic;
  throw ConfigurationError("unknown test function '" + name + "'");
}

inline std::string function_kind_name(FunctionSpec::Kind kind) {
  switch (kind) {
    case FunctionSpec::Kind::peaks: return "peaks";
    case FunctionSpec::Kind::linear: return "linear";
    case FunctionSpec::Kind::quadratic: return "quadratic";
  }
  return "unknown";
}

/// Synthetic black box returning f(p) + eps. The noise of the k-th call is drawn from
/// a generator seeded by derive_seed(seed, evaluator_noise, k), so a resumed evaluator
/// only needs its call count to continue the same stream.
class TestEvaluator {
 public:
  TestEvaluator(FunctionSpec fn, double lambda, std::uint64_t seed)
      : fn_(std::move(fn)), lambda_(lambda), seed_(seed) {
    check_lambda(lambda);
  }

  double operator()(std::span<const double> x) {
    const double clean = fn_(x);
    Rng rng = make_rng(seed_, Stream::evaluator_noise, calls_);
    ++calls_;
    return add_noise(clean, lambda_, rng);
  }

  std::size_t calls() const noexcept { return calls_; }
  void resume_at(std::size_t calls) noexcept { calls_ = calls; }
  const FunctionSpec& function() const noexcept { return fn_; }
  double lambda() const noexcept { return lambda_; }

 private:
  FunctionSpec fn_;
  double lambda_;
  std::uint64_t seed_;
  std::size_t calls_ = 0;
};

inline TestEvaluator make_evaluator(FunctionSpec fn, double lambda, std::uint64_t seed) {
  return TestEvaluator(std::move(fn), lambda, seed);
}

inline TestEvaluator make_evaluator(const std::string& name, double lambda, std::uint64_t seed,
                                    std::vector<double> parameters = {}) {
  switch (parse_function_kind(name)) {
    case FunctionSpec::Kind::peaks: return make_evaluator(FunctionSpec::make_peaks(), lambda, seed);
    case FunctionSpec::Kind::linear:
      return make_evaluator(FunctionSpec::linear(std::move(parameters)), lambda, seed);
    case FunctionSpec::Kind::quadratic:
      return make_evaluator(FunctionSpec::quadratic(std::move(parameters)), lambda, seed);
  }
  throw ConfigurationError("unknown test function '" + name + "'");
}

// ---------------------------------------------------------------------------
// Distribution metrics

/// Share of adaptive points (iteration >= 1) that fall inside the region. A design
/// without adaptive points is measured over all of its points; an empty design gives 0.
inline double region_fraction(const Design& design, const Region& region) {
  if (region.lower.size() != design.dim() || region.upper.size() != design.dim())
    throw UsageError("region dimension does not match the design");
  for (std::size_t k = 0; k < design.dim(); ++k)
    if (region.lower[k] < design.space().lower()[k] || region.upper[k] > design.space().upper()[k] ||
        region.lower[k] > region.upper[k])
      throw UsageError("region must be a box inside the design space");

  std::size_t adaptive = 0;
  for (const auto& p : design.points())
    if (p.iteration >= 1) ++adaptive;
  const bool all = adaptive == 0;

  std::size_t counted = 0;
  std::size_t inside = 0;
  for (const auto& p : design.points()) {
    if (!all && p.iteration == 0) continue;
    ++counted;
    if (region.contains(p.coords)) ++inside;
  }
  return counted == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(counted);
}

struct SpacingStats {
  double mean = 0.0;
  double cv = 0.0;  // population standard deviation / mean
};

/// Nearest-neighbor distances (unit cube) over all design points.
inline SpacingStats nn_distance_stats(const Design& design) {
  const std::size_t n = design.size();
  if (n < 2) throw UsageError("nearest-neighbor statistics need at least two points");
  std::vector<double> nn(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = distance(design.normalized(i), design.normalized(j));
      nn[i] = std::min(nn[i], dist);
      nn[j] = std::min(nn[j], dist);
    }
  double mean = 0.0;
  for (double x : nn) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : nn) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  return {mean, mean > 0.0 ? std::sqrt(var) / mean : 0.0};
}

}  // namespace flola
