#include "isocurv/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace isocurv {

void Domain::validate() const {
  const bool finite = std::isfinite(u_min) && std::isfinite(u_max) && std::isfinite(v_min) &&
                      std::isfinite(v_max);
  if (!finite || !(u_min < u_max) || !(v_min < v_max)) {
    throw std::invalid_argument("degenerate domain " + describe(*this));
  }
}

void Grid::validate() const {
  if (nu < 2 || nv < 2) throw std::invalid_argument("grid resolution must be at least 2 per axis");
  if (!(margin >= 0.0 && margin < 0.5)) throw std::invalid_argument("grid margin must lie in [0, 0.5)");
}

std::vector<GridPoint> sample(const Domain& domain, const Grid& grid) {
  domain.validate();
  grid.validate();
  const double du = domain.u_max - domain.u_min;
  const double dv = domain.v_max - domain.v_min;
  const double u0 = domain.u_min + grid.margin * du;
  const double u1 = domain.u_max - grid.margin * du;
  const double v0 = domain.v_min + grid.margin * dv;
  const double v1 = domain.v_max - grid.margin * dv;

  std::vector<GridPoint> points;
  points.reserve(grid.nu * grid.nv);
  for (std::size_t i = 0; i < grid.nu; ++i) {
    // Endpoints are assigned exactly so the margin-free grid hits the corners.
    const double u = (i + 1 == grid.nu) ? u1 : u0 + (u1 - u0) * static_cast<double>(i) / (grid.nu - 1);
    for (std::size_t j = 0; j < grid.nv; ++j) {
      const double v =
          (j + 1 == grid.nv) ? v1 : v0 + (v1 - v0) * static_cast<double>(j) / (grid.nv - 1);
      points.push_back({i, j, u, v});
    }
  }
  return points;
}

std::string describe(const Domain& d) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g] x [%.17g, %.17g]", d.u_min, d.u_max, d.v_min,
                d.v_max);
  return buf;
}

}  // namespace isocurv
