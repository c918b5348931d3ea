#include "isocurv/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isocurv/factorable.hpp"
#include "oracles.hpp"

namespace isocurv {
namespace {

constexpr double kPi = std::numbers::pi;

SurfacePatch phi3(std::string_view f, std::string_view g, Domain d = {0.5, 2, 0.5, 2}) {
  const std::string x = "(" + std::string(f) + ")*(" + std::string(g) + ")";
  return SurfacePatch::parse(x, "y", "z", d, "y", "z");
}

void expect_forms(const FundamentalForms& f, double E, double F, double G, double W, double l,
                  double m, double n, double tol = 1e-12) {
  EXPECT_NEAR(f.E, E, tol);
  EXPECT_NEAR(f.F, F, tol);
  EXPECT_NEAR(f.G, G, tol);
  EXPECT_NEAR(f.W, W, tol);
  EXPECT_NEAR(f.l, l, tol);
  EXPECT_NEAR(f.m, m, tol);
  EXPECT_NEAR(f.n, n, tol);
}

// Second-form entries rebuilt from finite differences of the scalar
// coordinates, using the same row order and the oriented root of W.
FundamentalForms forms_by_differences(const SurfacePatch& p, double u, double v) {
  std::array<Jet2, 3> r;
  for (int k = 0; k < 3; ++k) {
    r[k] = testing::finite_difference_jet(
        [&](double a, double b) { return eval_scalar(p.coords()[k], {{p.u_name(), a}, {p.v_name(), b}}); },
        u, v, 1e-4);
  }
  const double xu = r[0].d_u, yu = r[1].d_u, zu = r[2].d_u;
  const double xv = r[0].d_v, yv = r[1].d_v, zv = r[2].d_v;
  const auto det = [&](double a, double b, double c) {
    return a * (yu * zv - zu * yv) - b * (xu * zv - zu * xv) + c * (xu * yv - yu * xv);
  };
  FundamentalForms f;
  f.E = xu * xu + yu * yu;
  f.F = xu * xv + yu * yv;
  f.G = xv * xv + yv * yv;
  f.W = f.E * f.G - f.F * f.F;
  f.sigma = xv * yu - xu * yv;
  f.l = det(r[0].d_uu, r[1].d_uu, r[2].d_uu) / f.sigma;
  f.m = det(r[0].d_uv, r[1].d_uv, r[2].d_uv) / f.sigma;
  f.n = det(r[0].d_vv, r[1].d_vv, r[2].d_vv) / f.sigma;
  return f;
}

TEST(FundamentalForms, Plane) {
  const auto p = SurfacePatch::parse("u", "v", "0", {-1, 1, -1, 1});
  for (double u : {-0.5, 0.3}) {
    const auto f = fundamental_forms(p, u, 0.7);
    expect_forms(f, 1, 0, 1, 1, 0, 0, 0);
    const auto c = curvatures(f);
    EXPECT_EQ(c.K, 0);
    EXPECT_EQ(c.H, 0);
  }
}

TEST(FundamentalForms, ReciprocalTimesLinear) {
  const auto p = phi3("1/y", "z");
  const auto f = fundamental_forms(p, 1, 1);
  expect_forms(f, 2, -1, 1, 1, 2, -1, 0);
  const auto fd = forms_by_differences(p, 1, 1);
  expect_forms(fd, 2, -1, 1, 1, 2, -1, 0, 1e-6);
}

TEST(FundamentalForms, LinearTimesTangent) {
  const auto p = phi3("y", "tan(z)");
  const auto f = fundamental_forms(p, 1, kPi / 4);
  expect_forms(f, 2, 2, 4, 4, 0, 1, 2);
  const auto fd = forms_by_differences(p, 1, kPi / 4);
  expect_forms(fd, 2, 2, 4, 4, 0, 1, 2, 1e-6);
}

TEST(FundamentalForms, DegenerateMetricThrows) {
  const auto p = phi3("1", "1");
  try {
    fundamental_forms(p, 1, 1);
    FAIL() << "expected NotAdmissible";
  } catch (const NotAdmissible& e) {
    EXPECT_EQ(e.discriminant(), 0);
    EXPECT_EQ(e.u(), 1);
  }
}

TEST(Curvatures, SignedExampleValues) {
  auto c = curvatures(fundamental_forms(phi3("1/y", "z"), 1, 1));
  EXPECT_NEAR(c.K, -1, 1e-14);
  EXPECT_NEAR(c.H, 0, 1e-14);

  c = curvatures(fundamental_forms(phi3("-1", "sqrt(z)"), 1, 1));
  EXPECT_NEAR(c.H, -1, 1e-14);
  EXPECT_NEAR(c.K, 0, 1e-14);

  c = curvatures(FundamentalForms{1, 0, 1, 0, 0, 0, 1, 1});
  EXPECT_EQ(c.K, 0);
  EXPECT_EQ(c.H, 0);

  EXPECT_THROW(curvatures(FundamentalForms{1, 1, 1, 0, 0, 0, 0, 0}), NotAdmissible);
}

TEST(Admissibility, Plane) {
  const auto rep = admissibility_check(SurfacePatch::parse("u", "v", "0", {0, 1, 0, 1}), Grid{9, 9});
  EXPECT_TRUE(rep.admissible);
  EXPECT_EQ(rep.worst_W, 1);
}

TEST(Admissibility, ConstantFactorsAreDegenerate) {
  const auto rep = admissibility_check(phi3("1", "1"), Grid{5, 5});
  EXPECT_FALSE(rep.admissible);
  EXPECT_EQ(rep.failing.size(), 25u);
  EXPECT_EQ(rep.worst_W, 0);
}

TEST(Admissibility, WorstPointOfReciprocalSurface) {
  const auto p = phi3("1/y", "z", {1, kPi, 1, 2 * kPi});
  const auto rep = admissibility_check(p, Grid{16, 16, 0.0});
  EXPECT_TRUE(rep.admissible);
  // W = (f g')^2 = 1/y^2, smallest on the edge y = pi.
  EXPECT_NEAR(rep.worst_W, 1 / (kPi * kPi), 1e-15);
}

TEST(Admissibility, EvaluationFailuresAreReported) {
  const auto rep = admissibility_check(SurfacePatch::parse("ln(u)", "v", "0", {-1, 1, 0, 1}), Grid{4, 4});
  EXPECT_FALSE(rep.admissible);
  ASSERT_FALSE(rep.failing.empty());
  EXPECT_TRUE(std::isnan(rep.failing.front().W));
}

TEST(EvaluateGrid, CollectsPerPointErrors) {
  const auto s = evaluate_grid(SurfacePatch::parse("sqrt(u)", "v", "u*v", {-1, 1, 0, 1}), Grid{4, 3, 0});
  ASSERT_EQ(s.size(), 12u);
  EXPECT_FALSE(s.front().curv.has_value());
  EXPECT_FALSE(s.front().error.empty());
  EXPECT_TRUE(s.back().curv.has_value());
}

TEST(Motion, PointExamples) {
  EXPECT_EQ(IsotropicMotion{}({1, 2, 3}), (std::array<double, 3>{1, 2, 3}));
  const auto r = IsotropicMotion{0, 0, 0, 0, 0, kPi / 2}({1, 0, 0});
  EXPECT_NEAR(r[0], 0, 1e-16);
  EXPECT_NEAR(r[1], 1, 1e-16);
  EXPECT_NEAR(r[2], 0, 1e-16);
  EXPECT_EQ((IsotropicMotion{0, 0, 0, 1, 0, 0}({1, 0, 0})), (std::array<double, 3>{1, 0, 1}));
}

TEST(Motion, IdentityKeepsCoordinates) {
  const auto p = phi3("y", "tan(z)");
  const auto q = apply_motion(IsotropicMotion{}, p);
  for (double y : {0.6, 1.1}) {
    for (double z : {0.5, 0.9}) EXPECT_EQ(q.position(y, z), p.position(y, z));
  }
}

TEST(Motion, PatchPositionsFollowPointMap) {
  const IsotropicMotion m{0.3, -1.2, 2.0, 0.7, -0.4, 1.1};
  const auto p = phi3("1/y", "z");
  const auto q = apply_motion(m, p);
  const auto expected = m(p.position(1.3, 0.8));
  const auto got = q.position(1.3, 0.8);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], expected[k], 1e-14);
}

TEST(GeometryProperty, CurvaturesAreMotionInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(-3, 3), angle(-kPi, kPi), pt(0.6, 1.9);
  const SurfacePatch patches[] = {
      phi3("y", "tan(z)", {0.5, 1.0, 0.5, 1.0}), phi3("-1", "sqrt(z)"), phi3("-0.25*y^2", "1/z"),
      phi3("1/y", "z"), SurfacePatch::parse("u+0.2*v^2", "v-0.1*u*v", "exp(u)*sin(v)", {0.5, 2, 0.5, 2}),
  };
  for (int trial = 0; trial < 100; ++trial) {
    const IsotropicMotion m{a(rng), a(rng), a(rng), a(rng), a(rng), angle(rng)};
    for (const auto& p : patches) {
      const double u = std::min(pt(rng), p.domain().u_max), v = std::min(pt(rng), p.domain().v_max);
      const auto before = curvatures(fundamental_forms(p, u, v));
      const auto after = curvatures(fundamental_forms(apply_motion(m, p), u, v));
      ASSERT_NEAR(after.K, before.K, 1e-9);
      ASSERT_NEAR(after.H, before.H, 1e-9);
    }
  }
}

TEST(GeometryProperty, FactorableDiscriminantAndSecondForm) {
  struct Pair {
    const char* f;
    const char* df;   // f'
    const char* d2f;  // f''
    const char* g;
    const char* dg;
    const char* d2g;
  };
  // Derivatives written out by hand; they serve as the closed-form oracle.
  const Pair pairs[] = {
      {"y^2+2", "2*y", "2", "z^2+z+1", "2*z+1", "2"},
      {"exp(y)", "exp(y)", "exp(y)", "sin(z)", "cos(z)", "-sin(z)"},
      {"1/y", "-1/y^2", "2/y^3", "z^3", "3*z^2", "6*z"},
      {"sqrt(y)", "0.5/sqrt(y)", "-0.25/y^1.5", "ln(z)", "1/z", "-1/z^2"},
  };
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pt(0.6, 1.4);
  for (const auto& pr : pairs) {
    const auto p = phi3(pr.f, pr.g);
    const auto ev = [](const char* s, const char* var, double x) {
      return eval_scalar(parse_or_throw(s, {"y", "z"}), {{var, x}});
    };
    for (int trial = 0; trial < 20; ++trial) {
      const double y = pt(rng), z = pt(rng);
      const double f = ev(pr.f, "y", y), df = ev(pr.df, "y", y), d2f = ev(pr.d2f, "y", y);
      const double g = ev(pr.g, "z", z), dg = ev(pr.dg, "z", z), d2g = ev(pr.d2g, "z", z);
      const auto forms = fundamental_forms(p, y, z);
      const double W = (f * dg) * (f * dg);
      EXPECT_NEAR(forms.W, W, 1e-12 * W) << pr.f << " " << pr.g;
      const auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(std::abs(want), 1e-300);
      };
      const double l = d2f * g / (f * dg), m = df / f, n = d2g / dg;
      if (std::abs(l) > 1e-6) EXPECT_LE(rel(forms.l, l), 1e-10) << pr.f;
      if (std::abs(m) > 1e-6) EXPECT_LE(rel(forms.m, m), 1e-10) << pr.f;
      if (std::abs(n) > 1e-6) EXPECT_LE(rel(forms.n, n), 1e-10) << pr.g;
    }
  }
}

TEST(GeometryProperty, ReparameterizationKeepsCurvatures) {
  const SurfacePatch patches[] = {
      phi3("y", "tan(z)", {0.5, 1.0, 0.5, 1.0}), phi3("y^2+2", "z^2+z+1"),
      SurfacePatch::parse("u+0.2*v^2", "v-0.1*u*v", "exp(u)*sin(v)", {0.5, 2, 0.5, 2}),
  };
  for (const auto& p : patches) {
    const Expr twice = Expr::number(2) * Expr::variable(p.v_name());
    const auto stretch = [&](int k) { return substitute(p.coords()[k], {{p.v_name(), twice}}); };
    const std::array<Expr, 3> coords{stretch(0), stretch(1), stretch(2)};
    Domain d = p.domain();
    d.v_min /= 2;
    d.v_max /= 2;
    const SurfacePatch q(coords, p.u_name(), p.v_name(), d);
    for (double u : {0.6, 0.8, 0.95}) {
      for (double v : {0.55, 0.7, 0.9}) {
        const auto a = curvatures(fundamental_forms(p, u, v));
        const auto b = curvatures(fundamental_forms(q, u, v / 2));
        EXPECT_NEAR(a.K, b.K, 1e-9);
        EXPECT_NEAR(a.H, b.H, 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace isocurv
