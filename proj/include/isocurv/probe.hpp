#pragma once

// Numerical search for a constant lambda with H + lambda K = 0 on a
// factorable surface. A surface that admits one would have H/K constant; the
// probe reports how far the best lambda is from achieving that.

#include <cstddef>
#include <span>
#include <string_view>

#include "isocurv/factorable.hpp"
#include "isocurv/geometry.hpp"

namespace isocurv {

enum class Degeneracy { HZero, KZero, None };

std::string_view to_string(Degeneracy d);

inline constexpr double kLambdaBound = 1e4;

struct RatioProbeReport {
  Degeneracy degenerate = Degeneracy::None;
  double best_lambda = 0.0;          // NaN when degenerate
  double min_scaled_residual = 0.0;  // NaN when degenerate
  double ratio_stddev = 0.0;         // population stddev of H/K over points with |K| > tol
  double max_abs_H = 0.0;
  double max_abs_K = 0.0;
  std::size_t points = 0;
};

/// max over samples of |H + lambda K| / (|H| + |lambda K|); terms with a zero
/// denominator count as 0.
double scaled_residual(std::span<const Curvatures> samples, double lambda);

struct LambdaFit {
  double lambda = 0.0;
  double residual = 0.0;
};

/// Minimizes scaled_residual over lambda in [-kLambdaBound, kLambdaBound]: a
/// log-spaced scan followed by golden-section refinement around the three
/// best scan points. Ties prefer the smallest |lambda|.
LambdaFit fit_lambda(std::span<const Curvatures> samples);

/// Throws RegularityError when the spec is not regular and admissible on the grid.
RatioProbeReport ratio_probe(const FactorableSpec& spec, const Grid& grid, double tol = 1e-8);

}  // namespace isocurv
