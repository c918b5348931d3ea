#pragma once

// Curvature of admissible surfaces in isotropic 3-space, where the metric is
// ds^2 = dx^2 + dy^2 and the isotropic direction is z.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "isocurv/expr.hpp"
#include "isocurv/grid.hpp"
#include "isocurv/jet.hpp"

namespace isocurv {

/// Default floor on EG - F^2 below which a point counts as non-admissible.
inline constexpr double kAdmissibilityFloor = 1e-12;

/// r(u, v) = (x, y, z), each coordinate an expression in the two parameters.
class SurfacePatch {
 public:
  SurfacePatch(std::array<Expr, 3> coords, std::string u_name, std::string v_name, Domain domain,
               std::optional<std::string> family_tag = std::nullopt);

  /// Parses three coordinate formulas over the given parameter names.
  static SurfacePatch parse(std::string_view x, std::string_view y, std::string_view z,
                            Domain domain, std::string u_name = "u", std::string v_name = "v");

  const std::array<Expr, 3>& coords() const { return coords_; }
  const std::string& u_name() const { return u_name_; }
  const std::string& v_name() const { return v_name_; }
  const Domain& domain() const { return domain_; }
  const std::optional<std::string>& family_tag() const { return family_tag_; }

  std::array<Jet2, 3> jets(double u, double v) const;
  std::array<double, 3> position(double u, double v) const;

 private:
  std::array<Expr, 3> coords_;
  std::string u_name_;
  std::string v_name_;
  Domain domain_;
  std::optional<std::string> family_tag_;
};

struct FundamentalForms {
  double E = 0, F = 0, G = 0;  // first form of the degenerate metric
  double l = 0, m = 0, n = 0;  // second form
  double W = 0;                // EG - F^2, evaluated as sigma^2
  /// Oriented root of W: x_v y_u - x_u y_v. The second-form determinants are
  /// divided by this value, which fixes the normal orientation independently
  /// of the parameterization.
  double sigma = 0;
};

struct Curvatures {
  double K = 0;  // isotropic Gaussian (relative) curvature
  double H = 0;  // isotropic mean curvature
};

/// Fundamental forms from the jets of (x, y, z). Throws NotAdmissible when
/// W <= floor; (u, v) only label the error.
FundamentalForms fundamental_forms(const std::array<Jet2, 3>& r, double u, double v,
                                   double floor = kAdmissibilityFloor);

FundamentalForms fundamental_forms(const SurfacePatch& patch, double u, double v,
                                   double floor = kAdmissibilityFloor);

Curvatures curvatures(const FundamentalForms& forms, double floor = kAdmissibilityFloor);

struct FailingPoint {
  GridPoint at;
  double W;            // NaN when evaluation itself failed
  std::string reason;
};

struct AdmissibilityReport {
  bool admissible = true;
  double worst_W = 0.0;
  std::vector<FailingPoint> failing;
};

AdmissibilityReport admissibility_check(const SurfacePatch& patch, const Grid& grid,
                                        double floor = kAdmissibilityFloor);

/// Everything known at one grid point. forms/curv are empty when the point
/// failed; error then holds the reason.
struct PointSample {
  GridPoint at;
  std::array<double, 3> position{};
  std::optional<FundamentalForms> forms;
  std::optional<Curvatures> curv;
  std::string error;
  bool not_admissible = false;  // the failure was W at or below the floor
};

/// Evaluates the patch over the grid, in parallel. Never throws for
/// per-point failures.
std::vector<PointSample> evaluate_grid(const SurfacePatch& patch, const Grid& grid,
                                       double floor = kAdmissibilityFloor);

/// Element of the motion group of isotropic space:
///   x' = a1 + x cos(phi) - y sin(phi)
///   y' = a2 + x sin(phi) + y cos(phi)
///   z' = a3 + a4 x + a5 y + z
struct IsotropicMotion {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0;
  double phi = 0;

  std::array<double, 3> operator()(const std::array<double, 3>& p) const;
};

SurfacePatch apply_motion(const IsotropicMotion& motion, const SurfacePatch& patch);

}  // namespace isocurv
