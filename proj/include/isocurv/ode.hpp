#pragma once

// Fixed-step RK4 generation of the factor g(z) for the surface families that
// have no closed form in z. Output rows are (z, g, g').

#include <cstddef>
#include <vector>

#include "isocurv/tabulated.hpp"

namespace isocurv {

/// Integrates g'' = 2 H0 f0^2 (g')^3 from (z0, g0, r0 = g'(z0)) to z_end.
/// This is the constant-mean-curvature condition for x = f0 g(z).
///
/// Throws InvalidConstants when H0, f0, r0 are zero or steps is zero,
/// RadicandNonpositive when 1/g'^2 (linear in z along exact solutions) is not
/// positive over the interval, and BlowUp when |g'| exceeds 1e6 or z stops
/// advancing.
std::vector<TableSample> ode_generate_cmc(double H0, double f0, double z0, double g0, double r0,
                                          double z_end, std::size_t steps);

/// g' as a function of g for the constant Gaussian curvature family paired
/// with f = -1/(c2 y + c3):
///   r(g) = sign (c4^2 / g - K0 / c2^2)^(-1/2)
/// Throws RadicandNonpositive when g <= 0 or the radicand is not positive.
double k0_slope(double K0, double c2, double c4, double g, int sign);

/// Integrates dg/dz = k0_slope(g) from (z0, g0) to z_end.
std::vector<TableSample> ode_generate_k0(double K0, double c2, double c4, double g0, int sign,
                                         double z0, double z_end, std::size_t steps);

}  // namespace isocurv
