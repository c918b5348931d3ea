#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace isocurv {

/// Rectangular parameter domain [u_min, u_max] x [v_min, v_max].
struct Domain {
  double u_min = 0.0;
  double u_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;

  /// Throws std::invalid_argument unless both spans are positive and finite.
  void validate() const;
  bool contains(double u, double v) const {
    return u >= u_min && u <= u_max && v >= v_min && v <= v_max;
  }
};

/// Uniform sampling with every side pulled in by margin * span.
struct Grid {
  std::size_t nu = 64;
  std::size_t nv = 64;
  double margin = 1e-3;

  void validate() const;
};

struct GridPoint {
  std::size_t i = 0;
  std::size_t j = 0;
  double u = 0.0;
  double v = 0.0;
};

/// Row-major in u: index = i * nv + j.
std::vector<GridPoint> sample(const Domain& domain, const Grid& grid);

std::string describe(const Domain& domain);

}  // namespace isocurv
