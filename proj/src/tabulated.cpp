#include "isocurv/tabulated.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "isocurv/errors.hpp"

namespace isocurv {

TabulatedFunction::TabulatedFunction(std::vector<TableSample> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw DomainError("a tabulated function needs at least two samples");
  if (samples_.front().z > samples_.back().z) std::reverse(samples_.begin(), samples_.end());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.z) || !std::isfinite(s.g) || !std::isfinite(s.dg)) {
      throw DomainError("tabulated function has a non-finite sample");
    }
    if (i > 0 && !(samples_[i - 1].z < s.z)) {
      throw DomainError("tabulated abscissae are not strictly monotone");
    }
  }

  slopes_.reserve(samples_.size());
  for (const auto& s : samples_) slopes_.push_back(s.dg);

  // Fritsch-Carlson: zero slopes that disagree with the secant, then shrink
  // pairs outside the circle alpha^2 + beta^2 <= 9.
  std::vector<bool> touched(samples_.size(), false);
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    const double secant = (samples_[i + 1].g - samples_[i].g) / (samples_[i + 1].z - samples_[i].z);
    double& m0 = slopes_[i];
    double& m1 = slopes_[i + 1];
    if (secant == 0.0) {
      if (m0 != 0.0 || m1 != 0.0) touched[i] = touched[i + 1] = true;
      m0 = m1 = 0.0;
      continue;
    }
    double alpha = m0 / secant;
    double beta = m1 / secant;
    if (alpha < 0.0) {
      m0 = 0.0;
      alpha = 0.0;
      touched[i] = true;
    }
    if (beta < 0.0) {
      m1 = 0.0;
      beta = 0.0;
      touched[i + 1] = true;
    }
    const double radius2 = alpha * alpha + beta * beta;
    if (radius2 > 9.0) {
      const double tau = 3.0 / std::sqrt(radius2);
      m0 = tau * alpha * secant;
      m1 = tau * beta * secant;
      touched[i] = touched[i + 1] = true;
    }
  }
  limited_ = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
}

TabulatedFunction::Value TabulatedFunction::evaluate(double z) const {
  if (!(z >= z_min() && z <= z_max())) {
    throw DomainError("tabulated function evaluated outside [" + std::to_string(z_min()) + ", " +
                      std::to_string(z_max()) + "] at " + std::to_string(z));
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), z,
                             [](double value, const TableSample& s) { return value < s.z; });
  std::size_t i = (it == samples_.begin()) ? 0 : static_cast<std::size_t>(it - samples_.begin()) - 1;
  if (i + 1 >= samples_.size()) i = samples_.size() - 2;

  const double z0 = samples_[i].z;
  const double h = samples_[i + 1].z - z0;
  const double t = (z - z0) / h;
  const double g0 = samples_[i].g;
  const double g1 = samples_[i + 1].g;
  const double m0 = slopes_[i] * h;
  const double m1 = slopes_[i + 1] * h;

  const double t2 = t * t;
  const double t3 = t2 * t;
  const double g = (2 * t3 - 3 * t2 + 1) * g0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * g1 +
                   (t3 - t2) * m1;
  const double dg = ((6 * t2 - 6 * t) * g0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * g1 +
                     (3 * t2 - 2 * t) * m1) /
                    h;
  const double d2g =
      ((12 * t - 6) * g0 + (6 * t - 4) * m0 + (-12 * t + 6) * g1 + (6 * t - 2) * m1) / (h * h);
  return {g, dg, d2g};
}

void write_table(std::ostream& out, const std::vector<TableSample>& samples) {
  out << "z,g,dg\n";
  char buf[128];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.z, s.g, s.dg);
    out << buf;
  }
}

std::vector<TableSample> read_table(std::istream& in) {
  std::vector<TableSample> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("z,", 0) == 0) continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    TableSample s;
    if (!(fields >> s.z >> s.g >> s.dg)) throw DomainError("malformed table row: " + line);
    rows.push_back(s);
  }
  return rows;
}

}  // namespace isocurv
