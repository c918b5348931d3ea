#pragma once

// Factorable surfaces of type 2:
//   PHI3: r(y, z) = (f(y) g(z), y, z)
//   PHI2: r(x, z) = (x, f(x) g(z), z)

#include <string>
#include <string_view>

#include "isocurv/expr.hpp"
#include "isocurv/geometry.hpp"
#include "isocurv/grid.hpp"

namespace isocurv {

enum class FactorableType { Phi2, Phi3 };

/// Smallest |f| and |g'| accepted as regular.
inline constexpr double kRegularityFloor = 1e-12;

struct FactorableSpec {
  FactorableType type = FactorableType::Phi3;
  Expr f;              // depends on at most one variable, f_var
  std::string f_var;
  Expr g;              // depends on at most one variable, g_var
  std::string g_var;
  Domain domain;

  /// f may use one of x, y, t; g one of z, t.
  static FactorableSpec parse(FactorableType type, std::string_view f, std::string_view g,
                              Domain domain);

  /// Builds a spec from trees, inferring each factor's variable. Factors
  /// with no variable get the conventional name of their slot.
  static FactorableSpec from_exprs(FactorableType type, Expr f, Expr g, Domain domain);
};

/// Name of the first surface parameter: y for PHI3, x for PHI2.
const char* first_parameter(FactorableType type);

/// f, f', f'' at the first parameter and g, g', g'' at z.
struct FactorValues {
  double f, df, d2f;
  double g, dg, d2g;
};

/// Throws RegularityError when |f| or |g'| is at or below kRegularityFloor.
FactorValues factor_values(const FactorableSpec& spec, double s, double z);

/// Throws RegularityError at the first grid point where f or g' vanishes.
void check_regularity(const FactorableSpec& spec, const Grid& grid);

/// Coordinate embedding of the spec, without any regularity check.
SurfacePatch embed(const FactorableSpec& spec);

/// Coordinate embedding of the spec. Regularity is checked on `grid`.
SurfacePatch make_patch(const FactorableSpec& spec, const Grid& grid = Grid{});

/// Closed-form isotropic mean curvature of a factorable surface:
///   H = [((f'g)^2 + 1) g'' + g g'^2 (f f'' - 2 f'^2)] / (2 f^2 g'^3)
double mean_curvature_factorable(const FactorableSpec& spec, double s, double z);

/// Closed-form isotropic Gaussian curvature:
///   K = [f g f'' g'' - (f' g')^2] / (f g')^4
double gauss_curvature_factorable(const FactorableSpec& spec, double s, double z);

/// Numerator of H, which vanishes exactly on minimal surfaces.
double minimal_residual(const FactorValues& v);
/// Numerator of K, which vanishes exactly on flat surfaces.
double flat_residual(const FactorValues& v);

struct TypeComparison {
  double max_K_diff = 0.0;
  double max_absH_diff = 0.0;
  /// max |H_PHI2 - H_PHI3|; zero under the engine's fixed normal orientation.
  double max_signedH_diff = 0.0;
};

/// Builds PHI2 and PHI3 from the same factors and compares the generic
/// engine's curvatures at matched parameter points.
TypeComparison compare_types(const Expr& f, const Expr& g, const Domain& domain, const Grid& grid);

}  // namespace isocurv
