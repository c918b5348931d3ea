#include "isocurv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isocurv/errors.hpp"
#include "isocurv/parallel.hpp"

namespace isocurv {

SurfacePatch::SurfacePatch(std::array<Expr, 3> coords, std::string u_name, std::string v_name,
                           Domain domain, std::optional<std::string> family_tag)
    : coords_(std::move(coords)),
      u_name_(std::move(u_name)),
      v_name_(std::move(v_name)),
      domain_(domain),
      family_tag_(std::move(family_tag)) {
  domain_.validate();
  if (u_name_ == v_name_) throw std::invalid_argument("parameter names must differ");
}

SurfacePatch SurfacePatch::parse(std::string_view x, std::string_view y, std::string_view z,
                                 Domain domain, std::string u_name, std::string v_name) {
  const std::set<std::string, std::less<>> params{u_name, v_name};
  return SurfacePatch({parse_or_throw(x, params), parse_or_throw(y, params), parse_or_throw(z, params)},
                      std::move(u_name), std::move(v_name), domain);
}

std::array<Jet2, 3> SurfacePatch::jets(double u, double v) const {
  const JetBindings bindings{{u_name_, jet_seed(u, Seed::U)}, {v_name_, jet_seed(v, Seed::V)}};
  return {eval_jet(coords_[0], bindings), eval_jet(coords_[1], bindings),
          eval_jet(coords_[2], bindings)};
}

std::array<double, 3> SurfacePatch::position(double u, double v) const {
  const ScalarBindings bindings{{u_name_, u}, {v_name_, v}};
  return {eval_scalar(coords_[0], bindings), eval_scalar(coords_[1], bindings),
          eval_scalar(coords_[2], bindings)};
}

namespace {

using Vec3 = std::array<double, 3>;

// Determinant of the matrix with rows a, b, c.
double det_rows(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace

FundamentalForms fundamental_forms(const std::array<Jet2, 3>& r, double u, double v, double floor) {
  const Vec3 ru{r[0].d_u, r[1].d_u, r[2].d_u};
  const Vec3 rv{r[0].d_v, r[1].d_v, r[2].d_v};
  const Vec3 ruu{r[0].d_uu, r[1].d_uu, r[2].d_uu};
  const Vec3 ruv{r[0].d_uv, r[1].d_uv, r[2].d_uv};
  const Vec3 rvv{r[0].d_vv, r[1].d_vv, r[2].d_vv};

  FundamentalForms f;
  // z-derivatives do not enter: the metric is degenerate along z.
  f.E = ru[0] * ru[0] + ru[1] * ru[1];
  f.F = ru[0] * rv[0] + ru[1] * rv[1];
  f.G = rv[0] * rv[0] + rv[1] * rv[1];
  // EG - F^2 equals sigma^2 (Lagrange's identity); the square has no
  // cancellation when the tangent plane is nearly isotropic.
  f.sigma = rv[0] * ru[1] - ru[0] * rv[1];
  f.W = f.sigma * f.sigma;
  if (!(f.W > floor)) throw NotAdmissible(u, v, f.W);

  f.l = det_rows(ruu, ru, rv) / f.sigma;
  f.m = det_rows(ruv, ru, rv) / f.sigma;
  f.n = det_rows(rvv, ru, rv) / f.sigma;
  return f;
}

FundamentalForms fundamental_forms(const SurfacePatch& patch, double u, double v, double floor) {
  return fundamental_forms(patch.jets(u, v), u, v, floor);
}

Curvatures curvatures(const FundamentalForms& f, double floor) {
  if (!(f.W > floor)) {
    throw NotAdmissible(std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN(), f.W);
  }
  return {(f.l * f.n - f.m * f.m) / f.W, (f.E * f.n - 2.0 * f.F * f.m + f.G * f.l) / (2.0 * f.W)};
}

std::vector<PointSample> evaluate_grid(const SurfacePatch& patch, const Grid& grid, double floor) {
  const auto points = sample(patch.domain(), grid);
  std::vector<PointSample> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    PointSample& s = out[k];
    s.at = points[k];
    try {
      const auto r = patch.jets(s.at.u, s.at.v);
      s.position = {r[0].val, r[1].val, r[2].val};
      s.forms = fundamental_forms(r, s.at.u, s.at.v, floor);
      s.curv = curvatures(*s.forms, floor);
    } catch (const NotAdmissible& e) {
      s.forms.reset();
      s.error = e.what();
      s.not_admissible = true;
    } catch (const Error& e) {
      s.error = e.what();
    }
  });
  return out;
}

AdmissibilityReport admissibility_check(const SurfacePatch& patch, const Grid& grid, double floor) {
  const auto points = sample(patch.domain(), grid);
  std::vector<double> w(points.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> reason(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    try {
      const auto r = patch.jets(points[k].u, points[k].v);
      const double sigma = r[0].d_v * r[1].d_u - r[0].d_u * r[1].d_v;
      w[k] = sigma * sigma;
    } catch (const Error& e) {
      reason[k] = e.what();
    }
  });

  AdmissibilityReport report;
  report.worst_W = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (std::isnan(w[k])) {
      report.failing.push_back({points[k], w[k], reason[k]});
      continue;
    }
    report.worst_W = std::min(report.worst_W, w[k]);
    if (!(w[k] > floor)) report.failing.push_back({points[k], w[k], "EG-F^2 below floor"});
  }
  report.admissible = report.failing.empty();
  return report;
}

std::array<double, 3> IsotropicMotion::operator()(const std::array<double, 3>& p) const {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {a1 + p[0] * c - p[1] * s, a2 + p[0] * s + p[1] * c, a3 + a4 * p[0] + a5 * p[1] + p[2]};
}

SurfacePatch apply_motion(const IsotropicMotion& motion, const SurfacePatch& patch) {
  const auto num = [](double v) { return Expr::number(v); };
  const Expr& x = patch.coords()[0];
  const Expr& y = patch.coords()[1];
  const Expr& z = patch.coords()[2];
  const double c = std::cos(motion.phi);
  const double s = std::sin(motion.phi);
  return SurfacePatch({num(motion.a1) + x * num(c) - y * num(s),
                       num(motion.a2) + x * num(s) + y * num(c),
                       num(motion.a3) + num(motion.a4) * x + num(motion.a5) * y + z},
                      patch.u_name(), patch.v_name(), patch.domain(), patch.family_tag());
}

}  // namespace isocurv
