#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flola/design.hpp"
#include "flola/error.hpp"

namespace flola {

/// Reference point r plus its neighbor set N(p_r).
struct Neighborhood {
  std::size_t ref_index = 0;
  std::vector<std::size_t> neighbors;

  std::size_t t() const noexcept { return neighbors.size(); }
};

/// Local gradient in response units per unit-cube input unit.
struct GradientEstimate {
  std::vector<double> g;
  double residual_norm = 0.0;
};

inline std::size_t default_max_neighbors(std::size_t dim) { return 2 * dim; }

/// Greedy neighbor selection. The first neighbor is the point nearest to p_r; each
/// further neighbor maximizes
///
///   (distance to the closest already-selected neighbor) / (distance to p_r)
///
/// which prefers points that are close to p_r but spread around it. Ties go to the
/// lowest design index.
inline Neighborhood select_neighborhood(const Design& design, std::size_t r, std::size_t t_max) {
  const std::size_t n = design.size();
  if (n < 2) throw UsageError("neighborhood selection needs at least two design points");
  if (r >= n) throw UsageError("reference index outside the design");
  if (t_max == 0) throw UsageError("t_max must be at least 1");

  const std::size_t t = std::min(t_max, n - 1);
  const auto ref = design.normalized(r);

  std::vector<double> to_ref(n, 0.0);
  std::vector<double> to_selected(n, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(n, false);
  taken[r] = true;
  for (std::size_t i = 0; i < n; ++i) to_ref[i] = distance(design.normalized(i), ref);

  Neighborhood nb{r, {}};
  nb.neighbors.reserve(t);

  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i)
    if (!taken[i] && (first == n || to_ref[i] < to_ref[first])) first = i;

  for (std::size_t pick = first;;) {
    nb.neighbors.push_back(pick);
    taken[pick] = true;
    if (nb.t() == t) break;
    const auto chosen = design.normalized(pick);
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) to_selected[i] = std::min(to_selected[i], distance(design.normalized(i), chosen));

    std::size_t best = n;
    double best_ratio = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double ratio = to_selected[i] / to_ref[i];
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    pick = best;
  }
  return nb;
}

inline void check_neighborhood(const Design& design, const Neighborhood& nb) {
  if (nb.ref_index >= design.size()) throw UsageError("reference index outside the design");
  if (nb.neighbors.empty()) throw UsageError("neighborhood is empty");
  for (std::size_t i : nb.neighbors)
    if (i >= design.size() || i == nb.ref_index)
      throw UsageError("neighborhood holds an invalid index");
}

/// Least-squares fit of y_i - y_r = g . (p_i - p_r) over the neighborhood, unit-cube
/// coordinates. Rank-deficient or underdetermined systems give the minimum-norm
/// solution; singular values below 1e-10 * sigma_max are dropped.
inline GradientEstimate estimate_gradient(const Design& design, const Neighborhood& nb) {
  check_neighborhood(design, nb);
  const std::size_t d = design.dim();
  const std::size_t t = nb.t();
  const double y_r = design.response(nb.ref_index);
  if (!std::isfinite(y_r)) throw DataError("reference response is not finite");

  Eigen::MatrixXd a(t, d);
  Eigen::VectorXd b(t);
  const auto ref = design.normalized(nb.ref_index);
  for (std::size_t row = 0; row < t; ++row) {
    const std::size_t i = nb.neighbors[row];
    const double y_i = design.response(i);
    if (!std::isfinite(y_i)) throw DataError("neighbor response is not finite");
    const auto p = design.normalized(i);
    for (std::size_t k = 0; k < d; ++k) a(row, k) = p[k] - ref[k];
    b(row) = y_i - y_r;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Eigen::VectorXd g = svd.solve(b);

  GradientEstimate out;
  out.g.assign(g.data(), g.data() + d);
  out.residual_norm = (a * g - b).norm();
  for (double gk : out.g)
    if (!std::isfinite(gk)) throw DataError("gradient estimate is not finite");
  return out;
}

/// Linear prediction error at p_r given per-point responses; the design only supplies
/// geometry. Lets callers score noisy and noise-free responses against a shared g.
inline double nonlinearity_score(const Design& design, const Neighborhood& nb,
                                 const GradientEstimate& grad, std::span<const double> responses) {
  check_neighborhood(design, nb);
  if (grad.g.size() != design.dim()) throw UsageError("gradient dimension mismatch");
  if (responses.size() != design.size()) throw UsageError("one response per design point");
  const auto ref = design.normalized(nb.ref_index);
  const double y_r = responses[nb.ref_index];
  double e = 0.0;
  for (std::size_t i : nb.neighbors) {
    const auto p = design.normalized(i);
    double pred = y_r;
    for (std::size_t k = 0; k < design.dim(); ++k) pred += grad.g[k] * (p[k] - ref[k]);
    e += std::abs(responses[i] - pred);
  }
  return e;
}

/// E(p_r) = sum over N(p_r) of |y_i - (y_r + g . (p_i - p_r))|.
inline double nonlinearity_score(const Design& design, const Neighborhood& nb,
                                 const GradientEstimate& grad) {
  std::vector<double> y(design.size());
  for (std::size_t i = 0; i < design.size(); ++i) y[i] = design.response(i);
  return nonlinearity_score(design, nb, grad, y);
}

/// Upper bound on a noisy score: the noise-free score plus the sum of |eps_i - eps_r|.
inline double noise_bound_rhs(double deterministic_score, std::span<const double> zeta) {
  double sum = deterministic_score;
  for (double z : zeta) {
    if (z < 0.0) throw UsageError("noise terms must be non-negative");
    sum += z;
  }
  return sum;
}

/// Exploitation score of every design point, recomputed from scratch.
/// Designs with fewer than two points score zero everywhere.
inline std::vector<double> exploitation_scores(const Design& design, std::size_t t_max) {
  std::vector<double> e(design.size(), 0.0);
  if (design.size() < 2) return e;
  for (std::size_t r = 0; r < design.size(); ++r) {
    const Neighborhood nb = select_neighborhood(design, r, t_max);
    e[r] = nonlinearity_score(design, nb, estimate_gradient(design, nb));
  }
  return e;
}

}  // namespace flola
