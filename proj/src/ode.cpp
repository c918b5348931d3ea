#include "isocurv/ode.hpp"

#include <array>
#include <cmath>
#include <string>

#include "isocurv/errors.hpp"

namespace isocurv {

namespace {

constexpr double kMaxSlope = 1e6;

template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& y, double h, Rhs&& rhs) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, h / 2, k1));
  const auto k3 = rhs(axpy(y, h / 2, k2));
  const auto k4 = rhs(axpy(y, h, k3));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

void check_advance(double z_prev, double z_next, double h) {
  if (h != 0.0 && !((h > 0.0) ? z_next > z_prev : z_next < z_prev)) {
    throw BlowUp("integration variable stopped advancing at z = " + std::to_string(z_prev));
  }
}

void check_slope(double r, double z) {
  if (!std::isfinite(r) || std::abs(r) > kMaxSlope) {
    throw BlowUp("|g'| exceeded " + std::to_string(kMaxSlope) + " near z = " + std::to_string(z));
  }
}

}  // namespace

std::vector<TableSample> ode_generate_cmc(double H0, double f0, double z0, double g0, double r0,
                                          double z_end, std::size_t steps) {
  if (H0 == 0.0 || f0 == 0.0 || r0 == 0.0) throw InvalidConstants("H0, f0 and r0 must be nonzero");
  if (steps == 0) throw InvalidConstants("at least one step is required");

  const double coeff = 2.0 * H0 * f0 * f0;
  // Along exact solutions 1/g'^2 = -4 H0 f0^2 z + c1, which must stay positive.
  const double c1 = 1.0 / (r0 * r0) + 2.0 * coeff * z0;
  for (double z : {z0, z_end}) {
    if (!(-2.0 * coeff * z + c1 > 0.0)) {
      throw RadicandNonpositive("1/g'^2 reaches zero before z = " + std::to_string(z));
    }
  }

  const double h = (z_end - z0) / static_cast<double>(steps);
  std::vector<TableSample> out;
  out.reserve(steps + 1);
  std::array<double, 2> state{g0, r0};
  double z = z0;
  out.push_back({z, g0, r0});
  for (std::size_t i = 1; i <= steps; ++i) {
    state = rk4_step(state, h, [coeff](const std::array<double, 2>& s) {
      return std::array<double, 2>{s[1], coeff * s[1] * s[1] * s[1]};
    });
    const double next = (i == steps) ? z_end : z0 + h * static_cast<double>(i);
    check_advance(z, next, h);
    z = next;
    check_slope(state[1], z);
    out.push_back({z, state[0], state[1]});
  }
  return out;
}

double k0_slope(double K0, double c2, double c4, double g, int sign) {
  if (!(g > 0.0)) throw RadicandNonpositive("g must stay positive, got " + std::to_string(g));
  const double radicand = c4 * c4 / g - K0 / (c2 * c2);
  if (!(radicand > 0.0)) {
    throw RadicandNonpositive("c4^2/g - K0/c2^2 = " + std::to_string(radicand) + " at g = " +
                              std::to_string(g));
  }
  return (sign < 0 ? -1.0 : 1.0) / std::sqrt(radicand);
}

std::vector<TableSample> ode_generate_k0(double K0, double c2, double c4, double g0, int sign,
                                         double z0, double z_end, std::size_t steps) {
  if (c2 == 0.0 || c4 == 0.0) throw InvalidConstants("c2 and c4 must be nonzero");
  if (sign != 1 && sign != -1) throw InvalidConstants("sign must be +1 or -1");
  if (!(g0 > 0.0)) throw RadicandNonpositive("g0 must be positive");
  if (steps == 0) throw InvalidConstants("at least one step is required");

  auto slope = [&](double g) { return k0_slope(K0, c2, c4, g, sign); };
  const double h = (z_end - z0) / static_cast<double>(steps);
  std::vector<TableSample> out;
  out.reserve(steps + 1);
  std::array<double, 1> state{g0};
  double z = z0;
  out.push_back({z, g0, slope(g0)});
  for (std::size_t i = 1; i <= steps; ++i) {
    state = rk4_step(state, h, [&](const std::array<double, 1>& s) {
      return std::array<double, 1>{slope(s[0])};
    });
    const double next = (i == steps) ? z_end : z0 + h * static_cast<double>(i);
    check_advance(z, next, h);
    z = next;
    const double r = slope(state[0]);
    check_slope(r, z);
    out.push_back({z, state[0], r});
  }
  return out;
}

}  // namespace isocurv
