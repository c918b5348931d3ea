#include "isocurv/factorable.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace isocurv {
namespace {

constexpr double kPi = std::numbers::pi;

FactorableSpec phi3(std::string_view f, std::string_view g, Domain d = {0.5, 2, 0.5, 2}) {
  return FactorableSpec::parse(FactorableType::Phi3, f, g, d);
}

TEST(MakePatch, Phi3Coordinates) {
  const auto spec = phi3("1/y", "z", {1, kPi, 1, 2 * kPi});
  const auto p = make_patch(spec);
  EXPECT_EQ(p.u_name(), "y");
  EXPECT_EQ(p.v_name(), "z");
  const auto pos = p.position(2, 3);
  EXPECT_DOUBLE_EQ(pos[0], 1.5);
  EXPECT_EQ(pos[1], 2);
  EXPECT_EQ(pos[2], 3);
}

TEST(MakePatch, Phi2PermutesCoordinates) {
  const auto p = make_patch(FactorableSpec::parse(FactorableType::Phi2, "-1", "sqrt(z)", {0.5, 2, 0.5, 2}));
  EXPECT_EQ(p.u_name(), "x");
  const auto pos = p.position(1.5, 4);
  EXPECT_EQ(pos[0], 1.5);
  EXPECT_DOUBLE_EQ(pos[1], -2);
  EXPECT_EQ(pos[2], 4);
}

TEST(MakePatch, FactorVariablesAreRenamed) {
  // t may stand for either slot.
  const auto spec = FactorableSpec::parse(FactorableType::Phi3, "1/t", "t^2", {1, 2, 1, 2});
  EXPECT_EQ(spec.f_var, "t");
  const auto pos = make_patch(spec).position(2, 3);
  EXPECT_DOUBLE_EQ(pos[0], 4.5);
}

TEST(MakePatch, RejectsSingularFactors) {
  EXPECT_THROW(make_patch(phi3("y-1", "z", {0, 2, 1, 2}), Grid{5, 5, 0}), RegularityError);
  EXPECT_THROW(make_patch(phi3("y", "1", {1, 2, 1, 2})), RegularityError);
  EXPECT_THROW(FactorableSpec::parse(FactorableType::Phi3, "y*z", "z", {1, 2, 1, 2}), ParseError);
}

TEST(ClosedForms, MeanCurvature) {
  EXPECT_NEAR(mean_curvature_factorable(phi3("y", "tan(z)"), 1, kPi / 4), 0, 1e-14);
  EXPECT_NEAR(mean_curvature_factorable(phi3("-1", "sqrt(z)"), 1, 1), -1, 1e-14);
  EXPECT_NEAR(mean_curvature_factorable(phi3("1/y", "z"), 2, 5), 0, 1e-14);
}

TEST(ClosedForms, GaussCurvature) {
  EXPECT_NEAR(gauss_curvature_factorable(phi3("1/y", "z"), 1, 1), -1, 1e-14);
  EXPECT_NEAR(gauss_curvature_factorable(phi3("-y^2/4", "1/z"), 1.2, 2), 0, 1e-14);
  EXPECT_NEAR(gauss_curvature_factorable(phi3("exp(y)", "exp(z)", {-1, 1, -1, 1}), 0.3, 0.7), 0, 1e-14);
}

TEST(ClosedForms, RegularityIsEnforced) {
  EXPECT_THROW(mean_curvature_factorable(phi3("y-1", "z"), 1, 1), RegularityError);
  EXPECT_THROW(gauss_curvature_factorable(phi3("y", "(z-1)^2"), 1.5, 1), RegularityError);
}

// The closed forms are derived for the engine's normal orientation; both
// must agree everywhere, whatever the signs of f and g'.
TEST(FactorableProperty, ClosedFormsAgreeWithGenericEngine) {
  const char* fs[] = {"y^2+2", "exp(0.5*y)", "-1/y", "sqrt(y)+1", "-3*y^3", "cos(y)+2", "ln(y)+3"};
  const char* gs[] = {"z^2+z+1", "-exp(z)", "sin(z)", "1/z", "-sqrt(z)", "z^3-5", "tan(0.5*z)"};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pt(0.6, 1.9);
  for (auto type : {FactorableType::Phi3, FactorableType::Phi2}) {
    for (const char* f : fs) {
      for (const char* g : gs) {
        const auto spec = FactorableSpec::parse(type, f, g, {0.5, 2, 0.5, 2});
        const auto patch = make_patch(spec);
        for (int trial = 0; trial < 5; ++trial) {
          const double s = pt(rng), z = pt(rng);
          const auto c = curvatures(fundamental_forms(patch, s, z));
          const double H = mean_curvature_factorable(spec, s, z);
          const double K = gauss_curvature_factorable(spec, s, z);
          ASSERT_LE(std::abs(H - c.H), 1e-9 * std::max(1.0, std::abs(c.H))) << f << " " << g;
          ASSERT_LE(std::abs(K - c.K), 1e-9 * std::max(1.0, std::abs(c.K))) << f << " " << g;
        }
      }
    }
  }
}

TEST(CompareTypes, ReciprocalTimesLinear) {
  const auto r = compare_types(parse_or_throw("1/t", {"t"}), parse_or_throw("t", {"t"}), {1, 2, 1, 2}, Grid{16, 16});
  EXPECT_LE(r.max_K_diff, 1e-10);
  EXPECT_LE(r.max_absH_diff, 1e-10);
}

TEST(CompareTypes, ConstantMeanCurvature) {
  const Expr f = parse_or_throw("-1", {"t"});
  const Expr g = parse_or_throw("sqrt(t)", {"t"});
  const Domain d{1, 2, 1, 2};
  const auto r = compare_types(f, g, d, Grid{16, 16});
  EXPECT_LE(r.max_absH_diff, 1e-10);
  for (auto type : {FactorableType::Phi2, FactorableType::Phi3}) {
    const auto spec = FactorableSpec::from_exprs(type, f, g, d);
    for (const auto& s : evaluate_grid(make_patch(spec), Grid{8, 8})) {
      ASSERT_TRUE(s.curv);
      EXPECT_NEAR(std::abs(s.curv->H), 1, 1e-12);
    }
  }
}

TEST(CompareTypes, MinimalFamilyStaysMinimal) {
  const auto r = compare_types(parse_or_throw("t", {"t"}), parse_or_throw("tan(t)", {"t"}),
                               {0.1, 1, 0.1, 1}, Grid{16, 16});
  EXPECT_LE(r.max_K_diff, 1e-10);
  EXPECT_LE(r.max_absH_diff, 1e-10);
  const auto spec = FactorableSpec::parse(FactorableType::Phi2, "t", "tan(t)", {0.1, 1, 0.1, 1});
  for (const auto& s : evaluate_grid(make_patch(spec), Grid{8, 8})) EXPECT_NEAR(s.curv->H, 0, 1e-10);
}

}  // namespace
}  // namespace isocurv
