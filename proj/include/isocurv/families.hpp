#pragma once

// Catalog of the constant-curvature factorable surfaces of type 2 (in the
// PHI3 embedding x = f(y) g(z)), with verification against both the closed
// forms and the generic curvature engine.
//
//   id      surface                           claim   constants (default)
//   T1_I1   x = c1 (c2 z + c3)  (plane)       H = 0   c1=1 c2=1 c3=0
//   T1_I2   x = y tan(c z)                    H = 0   c=1
//   T1_I3   x = c z / y                       H = 0   c=1
//   T1_II   x = sign sqrt(-z / H0)            H = H0  H0=-1 sign=1
//   T2_I1   x = c1 g(z)                       K = 0   c1=1, g formula exp(z)
//   T2_I2   x = c1 exp(c2 y + c3 z)           K = 0   c1=1 c2=1 c3=1
//   T2_I3   x = c1 y^c2 z^c3, c2 + c3 = 1     K = 0   c1=-0.25 c2=2 c3=-1
//   T2_II1  x = sign z / (sqrt(-K0) y)        K = K0  K0=-1 sign=1
//   T2_II2  f = c1 / y, g from an ODE         K = K0  c1=-1 K0=-1 c4=1 g0=1
//                                                     sign=1 z0=0 z_end=2
//                                                     steps=2000

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isocurv/factorable.hpp"
#include "isocurv/grid.hpp"

namespace isocurv {

enum class FamilyId { T1_I1, T1_I2, T1_I3, T1_II, T2_I1, T2_I2, T2_I3, T2_II1, T2_II2 };

inline constexpr FamilyId kAllFamilies[] = {
    FamilyId::T1_I1, FamilyId::T1_I2, FamilyId::T1_I3,  FamilyId::T1_II,  FamilyId::T2_I1,
    FamilyId::T2_I2, FamilyId::T2_I3, FamilyId::T2_II1, FamilyId::T2_II2,
};

std::string_view to_string(FamilyId id);
std::optional<FamilyId> parse_family_id(std::string_view text);
bool is_ode_family(FamilyId id);

struct FamilySpec {
  FamilyId id = FamilyId::T1_I1;
  /// Overrides of the family's default constants.
  std::map<std::string, double, std::less<>> constants;
  /// Falls back to default_domain() when empty.
  std::optional<Domain> domain;
  /// g(z) for T2_I1; "exp(z)" when empty.
  std::string g_formula;

  double constant(std::string_view name) const;
};

/// Constant names accepted by a family, with defaults.
const std::map<std::string, double, std::less<>>& default_constants(FamilyId id);

Domain default_domain(const FamilySpec& fam);

/// Formula text of f(y) and g(z). For T2_II2 g is "g_ode(z)", a tabulated function.
struct FamilyFormulas {
  std::string f;
  std::string g;
};

FamilyFormulas family_formulas(const FamilySpec& fam);

/// Validates constants and domain, then builds the factorable spec.
/// Throws InvalidConstants.
FactorableSpec instantiate_family(const FamilySpec& fam);

/// Same construction without constraint checks; used to build deliberately
/// broken instances.
FactorableSpec instantiate_family_unchecked(const FamilySpec& fam);

enum class ClaimKind { MeanCurvature, GaussCurvature };

struct Claim {
  ClaimKind kind = ClaimKind::MeanCurvature;
  double value = 0.0;
};

std::string to_string(const Claim& claim);

Claim family_claim(const FamilySpec& fam);

inline constexpr double kClosedFormTolerance = 1e-8;
inline constexpr double kOdeTolerance = 1e-6;

struct VerificationReport {
  Claim claim;
  Domain domain;
  Grid grid;
  double max_residual_specialized = 0.0;
  double max_residual_generic = 0.0;
  double max_residual = 0.0;
  GridPoint worst;
  double tolerance = kClosedFormTolerance;
  bool pass = false;
};

/// Evaluates |H - value| or |K - value| over the grid through both the closed
/// forms and the generic engine. Throws RegularityError at the first failing
/// grid point.
VerificationReport verify_claim(const FactorableSpec& spec, const Claim& claim, const Grid& grid,
                                double tolerance);

/// instantiate_family + verify_claim with the family's claim. The default
/// tolerance is kOdeTolerance for T2_II2 and kClosedFormTolerance otherwise.
VerificationReport verify_family(const FamilySpec& fam, const Grid& grid = Grid{},
                                 std::optional<double> tolerance = std::nullopt);

}  // namespace isocurv
