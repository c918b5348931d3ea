#include "isocurv/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "isocurv/errors.hpp"

namespace isocurv {

std::string_view to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::HZero: return "H_zero";
    case Degeneracy::KZero: return "K_zero";
    case Degeneracy::None: return "none";
  }
  return "?";
}

double scaled_residual(std::span<const Curvatures> samples, double lambda) {
  double worst = 0.0;
  for (const auto& c : samples) {
    const double denom = std::abs(c.H) + std::abs(lambda * c.K);
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(c.H + lambda * c.K) / denom);
  }
  return worst;
}

namespace {

struct Minimum {
  double lambda;
  double value;
};

Minimum golden_section(std::span<const Curvatures> samples, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = scaled_residual(samples, c);
  double fd = scaled_residual(samples, d);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = scaled_residual(samples, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = scaled_residual(samples, d);
    }
  }
  return fc < fd ? Minimum{c, fc} : Minimum{d, fd};
}

// Log-spaced scan of [-bound, bound] (20 points per decade down to 1e-4 in
// magnitude, plus zero), ascending.
std::vector<double> lambda_scan() {
  std::vector<double> positive;
  const int top = static_cast<int>(std::lround(20.0 * std::log10(kLambdaBound)));
  for (int k = -80; k <= top; ++k) positive.push_back(std::pow(10.0, k / 20.0));
  std::vector<double> all;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) all.push_back(-*it);
  all.push_back(0.0);
  all.insert(all.end(), positive.begin(), positive.end());
  return all;
}

}  // namespace

LambdaFit fit_lambda(std::span<const Curvatures> curv) {
  const auto scan = lambda_scan();
  std::vector<double> merit(scan.size());
  for (std::size_t i = 0; i < scan.size(); ++i) merit[i] = scaled_residual(curv, scan[i]);

  // Refine around the three best scan points, each bracketed by its neighbours.
  std::vector<std::size_t> order(scan.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (merit[a] != merit[b]) return merit[a] < merit[b];
    return std::abs(scan[a]) < std::abs(scan[b]) || (std::abs(scan[a]) == std::abs(scan[b]) && a < b);
  });
  Minimum best{scan[order[0]], merit[order[0]]};
  for (std::size_t r = 0; r < std::min<std::size_t>(3, order.size()); ++r) {
    const std::size_t i = order[r];
    const double lo = scan[i == 0 ? 0 : i - 1];
    const double hi = scan[std::min(i + 1, scan.size() - 1)];
    const Minimum m = golden_section(curv, lo, hi);
    if (m.value < best.value) best = m;
  }
  return {best.lambda, best.value};
}

RatioProbeReport ratio_probe(const FactorableSpec& spec, const Grid& grid, double tol) {
  const auto patch = make_patch(spec, grid);
  const auto samples = evaluate_grid(patch, grid);
  std::vector<Curvatures> curv;
  curv.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.curv) throw RegularityError(s.at.u, s.at.v, s.error);
    curv.push_back(*s.curv);
  }

  RatioProbeReport report;
  report.points = curv.size();
  for (const auto& c : curv) {
    report.max_abs_H = std::max(report.max_abs_H, std::abs(c.H));
    report.max_abs_K = std::max(report.max_abs_K, std::abs(c.K));
  }

  std::vector<double> ratios;
  for (const auto& c : curv) {
    if (std::abs(c.K) > tol) ratios.push_back(c.H / c.K);
  }
  if (ratios.size() >= 2) {
    const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
    double ss = 0.0;
    for (double q : ratios) ss += (q - mean) * (q - mean);
    report.ratio_stddev = std::sqrt(ss / ratios.size());
  }

  if (report.max_abs_H < tol || report.max_abs_K < tol) {
    report.degenerate = report.max_abs_H < tol ? Degeneracy::HZero : Degeneracy::KZero;
    report.best_lambda = std::numeric_limits<double>::quiet_NaN();
    report.min_scaled_residual = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  const LambdaFit fit = fit_lambda(curv);
  report.best_lambda = fit.lambda;
  report.min_scaled_residual = fit.residual;
  return report;
}

}  // namespace isocurv
