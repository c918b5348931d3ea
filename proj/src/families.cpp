#include "isocurv/families.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "isocurv/errors.hpp"
#include "isocurv/ode.hpp"
#include "isocurv/parallel.hpp"

namespace isocurv {

namespace {

using Constants = std::map<std::string, double, std::less<>>;

const Constants& defaults_for(FamilyId id) {
  static const std::map<FamilyId, Constants> table{
      {FamilyId::T1_I1, {{"c1", 1.0}, {"c2", 1.0}, {"c3", 0.0}}},
      {FamilyId::T1_I2, {{"c", 1.0}}},
      {FamilyId::T1_I3, {{"c", 1.0}}},
      {FamilyId::T1_II, {{"H0", -1.0}, {"sign", 1.0}}},
      {FamilyId::T2_I1, {{"c1", 1.0}}},
      {FamilyId::T2_I2, {{"c1", 1.0}, {"c2", 1.0}, {"c3", 1.0}}},
      {FamilyId::T2_I3, {{"c1", -0.25}, {"c2", 2.0}, {"c3", -1.0}}},
      {FamilyId::T2_II1, {{"K0", -1.0}, {"sign", 1.0}}},
      {FamilyId::T2_II2,
       {{"c1", -1.0}, {"K0", -1.0}, {"c4", 1.0}, {"g0", 1.0}, {"sign", 1.0}, {"z0", 0.0},
        {"z_end", 2.0}, {"steps", 2000.0}}},
  };
  return table.at(id);
}

std::string fmt(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// c*var with the unit coefficients written out plainly.
std::string scaled(double c, const std::string& var) {
  if (c == 1.0) return var;
  if (c == -1.0) return "-" + var;
  return fmt(c) + "*" + var;
}

std::string exponent(double p) { return p < 0 ? "(" + fmt(p) + ")" : fmt(p); }

bool is_integer(double v) { return v == std::nearbyint(v); }

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidConstants(message);
}

void require_nonzero(const FamilySpec& fam, std::string_view name) {
  require(fam.constant(name) != 0.0, std::string(to_string(fam.id)) + ": " + std::string(name) +
                                         " must be nonzero");
}

void require_sign(const FamilySpec& fam) {
  const double s = fam.constant("sign");
  require(s == 1.0 || s == -1.0, std::string(to_string(fam.id)) + ": sign must be +1 or -1");
}

// Singular lines on the domain boundary are tolerated because grids are inset.
void reject_interior(double line, double lo, double hi, const std::string& what) {
  if (lo < line && line < hi) {
    throw InvalidConstants("domain contains the singular line " + what + " = " + fmt(line));
  }
}

void reject_tan_poles(double c, double lo, double hi) {
  const double a = std::min(c * lo, c * hi);
  const double b = std::max(c * lo, c * hi);
  const double half_pi = std::numbers::pi / 2;
  const double k = std::ceil((a - half_pi) / std::numbers::pi);
  for (double kk : {k - 1, k, k + 1}) {
    const double pole = half_pi + kk * std::numbers::pi;
    if (a < pole && pole < b) {
      throw InvalidConstants("domain contains a pole of tan(c*z) at z = " + fmt(pole / c));
    }
  }
}

struct OdeSetup {
  double c2;
  std::size_t steps;
};

OdeSetup ode_setup(const FamilySpec& fam) {
  const double steps = fam.constant("steps");
  require(steps >= 1.0 && is_integer(steps), "T2_II2: steps must be a positive integer");
  require(fam.constant("c1") != 0.0, "T2_II2: c1 must be nonzero");
  // f = c1/y is -1/(c2 y) with c2 = -1/c1.
  return {-1.0 / fam.constant("c1"), static_cast<std::size_t>(steps)};
}

void validate(const FamilySpec& fam, const Domain& d) {
  const std::string id(to_string(fam.id));
  for (const auto& [name, value] : fam.constants) {
    require(default_constants(fam.id).contains(name), id + ": unknown constant '" + name + "'");
    require(std::isfinite(value), id + ": constant '" + name + "' is not finite");
  }
  d.validate();

  switch (fam.id) {
    case FamilyId::T1_I1:
      require_nonzero(fam, "c1");
      require_nonzero(fam, "c2");
      break;
    case FamilyId::T1_I2:
      require_nonzero(fam, "c");
      reject_interior(0.0, d.u_min, d.u_max, "y");
      reject_tan_poles(fam.constant("c"), d.v_min, d.v_max);
      break;
    case FamilyId::T1_I3:
      require_nonzero(fam, "c");
      reject_interior(0.0, d.u_min, d.u_max, "y");
      break;
    case FamilyId::T1_II: {
      require_nonzero(fam, "H0");
      require_sign(fam);
      const double h0 = fam.constant("H0");
      require(h0 < 0 ? d.v_min >= 0.0 : d.v_max <= 0.0,
              "T1_II: -z/H0 must be non-negative on the domain");
      break;
    }
    case FamilyId::T2_I1:
      require_nonzero(fam, "c1");
      break;
    case FamilyId::T2_I2:
      require_nonzero(fam, "c1");
      require_nonzero(fam, "c2");
      require_nonzero(fam, "c3");
      break;
    case FamilyId::T2_I3: {
      require_nonzero(fam, "c1");
      require_nonzero(fam, "c2");
      require_nonzero(fam, "c3");
      const double c2 = fam.constant("c2");
      const double c3 = fam.constant("c3");
      require(std::abs(c2 + c3 - 1.0) <= 1e-12, "T2_I3: c2 + c3 must equal 1, got " + fmt(c2 + c3));
      reject_interior(0.0, d.u_min, d.u_max, "y");
      reject_interior(0.0, d.v_min, d.v_max, "z");
      if (!is_integer(c2)) require(d.u_min >= 0.0, "T2_I3: non-integer power of y needs y >= 0");
      if (!is_integer(c3)) require(d.v_min >= 0.0, "T2_I3: non-integer power of z needs z >= 0");
      break;
    }
    case FamilyId::T2_II1:
      require(fam.constant("K0") < 0.0, "T2_II1: K0 must be negative");
      require_sign(fam);
      reject_interior(0.0, d.u_min, d.u_max, "y");
      break;
    case FamilyId::T2_II2: {
      ode_setup(fam);
      require_nonzero(fam, "K0");
      require_nonzero(fam, "c4");
      require_sign(fam);
      require(fam.constant("g0") > 0.0, "T2_II2: g0 must be positive");
      const double z0 = fam.constant("z0");
      const double z1 = fam.constant("z_end");
      require(z0 != z1, "T2_II2: z0 and z_end must differ");
      require(d.v_min >= std::min(z0, z1) && d.v_max <= std::max(z0, z1),
              "T2_II2: z-range must lie inside the integrated interval");
      reject_interior(0.0, d.u_min, d.u_max, "y");
      break;
    }
  }
}

FactorableSpec build(const FamilySpec& fam, const Domain& d) {
  const auto formulas = family_formulas(fam);
  if (fam.id != FamilyId::T2_II2) return FactorableSpec::parse(FactorableType::Phi3, formulas.f, formulas.g, d);

  const OdeSetup setup = ode_setup(fam);
  auto table = std::make_shared<const TabulatedFunction>(ode_generate_k0(
      fam.constant("K0"), setup.c2, fam.constant("c4"), fam.constant("g0"),
      fam.constant("sign") < 0 ? -1 : 1, fam.constant("z0"), fam.constant("z_end"), setup.steps));
  return FactorableSpec::from_exprs(FactorableType::Phi3, parse_or_throw(formulas.f, {"y"}),
                                    Expr::table(std::move(table), "g_ode", Expr::variable("z")), d);
}

}  // namespace

std::string_view to_string(FamilyId id) {
  switch (id) {
    case FamilyId::T1_I1: return "T1_I1";
    case FamilyId::T1_I2: return "T1_I2";
    case FamilyId::T1_I3: return "T1_I3";
    case FamilyId::T1_II: return "T1_II";
    case FamilyId::T2_I1: return "T2_I1";
    case FamilyId::T2_I2: return "T2_I2";
    case FamilyId::T2_I3: return "T2_I3";
    case FamilyId::T2_II1: return "T2_II1";
    case FamilyId::T2_II2: return "T2_II2";
  }
  return "?";
}

std::optional<FamilyId> parse_family_id(std::string_view text) {
  for (FamilyId id : kAllFamilies) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

bool is_ode_family(FamilyId id) { return id == FamilyId::T2_II2; }

const std::map<std::string, double, std::less<>>& default_constants(FamilyId id) {
  return defaults_for(id);
}

double FamilySpec::constant(std::string_view name) const {
  if (auto it = constants.find(name); it != constants.end()) return it->second;
  const auto& defaults = defaults_for(id);
  if (auto it = defaults.find(name); it != defaults.end()) return it->second;
  throw InvalidConstants(std::string(to_string(id)) + " has no constant '" + std::string(name) + "'");
}

Domain default_domain(const FamilySpec& fam) {
  constexpr double pi = std::numbers::pi;
  switch (fam.id) {
    case FamilyId::T1_I1:
    case FamilyId::T2_I1:
    case FamilyId::T2_I2: return {-1.0, 1.0, -1.0, 1.0};
    case FamilyId::T1_I2: {
      // Kept off the line y = 0, where f vanishes.
      const double c = std::abs(fam.constant("c"));
      return {0.02, pi / 3, 0.0, pi / (3 * (c == 0.0 ? 1.0 : c))};
    }
    case FamilyId::T1_I3:
    case FamilyId::T2_II1: return {1.0, pi, 1.0, 2 * pi};
    case FamilyId::T1_II:
      return fam.constant("H0") < 0 ? Domain{0.0, 2 * pi, 0.0, 2 * pi}
                                    : Domain{0.0, 2 * pi, -2 * pi, 0.0};
    case FamilyId::T2_I3: return {1.0, 1.4, 1.0, 2 * pi};
    case FamilyId::T2_II2: {
      const double z0 = fam.constant("z0");
      const double z1 = fam.constant("z_end");
      return {1.0, 2.0, std::min(z0, z1), std::max(z0, z1)};
    }
  }
  return {};
}

FamilyFormulas family_formulas(const FamilySpec& fam) {
  switch (fam.id) {
    case FamilyId::T1_I1: {
      const double c3 = fam.constant("c3");
      std::string g = scaled(fam.constant("c2"), "z");
      if (c3 > 0) g += " + " + fmt(c3);
      if (c3 < 0) g += " - " + fmt(-c3);
      return {fmt(fam.constant("c1")), g};
    }
    case FamilyId::T1_I2: return {"y", "tan(" + scaled(fam.constant("c"), "z") + ")"};
    case FamilyId::T1_I3: return {fmt(fam.constant("c")) + "/y", "z"};
    case FamilyId::T1_II:
      return {fam.constant("sign") < 0 ? "-1" : "1",
              "sqrt(" + scaled(-1.0 / fam.constant("H0"), "z") + ")"};
    case FamilyId::T2_I1:
      return {fmt(fam.constant("c1")), fam.g_formula.empty() ? "exp(z)" : fam.g_formula};
    case FamilyId::T2_I2: {
      const double c1 = fam.constant("c1");
      const std::string e = "exp(" + scaled(fam.constant("c2"), "y") + ")";
      return {c1 == 1.0 ? e : fmt(c1) + "*" + e, "exp(" + scaled(fam.constant("c3"), "z") + ")"};
    }
    case FamilyId::T2_I3: {
      const double c1 = fam.constant("c1");
      const std::string p = "y^" + exponent(fam.constant("c2"));
      return {c1 == 1.0 ? p : fmt(c1) + "*" + p, "z^" + exponent(fam.constant("c3"))};
    }
    case FamilyId::T2_II1: {
      const double k = fam.constant("sign") / std::sqrt(-fam.constant("K0"));
      return {fmt(k) + "/y", "z"};
    }
    case FamilyId::T2_II2: return {fmt(fam.constant("c1")) + "/y", "g_ode(z)"};
  }
  return {};
}

FactorableSpec instantiate_family(const FamilySpec& fam) {
  const Domain d = fam.domain.value_or(default_domain(fam));
  validate(fam, d);
  return build(fam, d);
}

FactorableSpec instantiate_family_unchecked(const FamilySpec& fam) {
  return build(fam, fam.domain.value_or(default_domain(fam)));
}

std::string to_string(const Claim& claim) {
  return std::string(claim.kind == ClaimKind::MeanCurvature ? "H=" : "K=") + fmt(claim.value);
}

Claim family_claim(const FamilySpec& fam) {
  switch (fam.id) {
    case FamilyId::T1_I1:
    case FamilyId::T1_I2:
    case FamilyId::T1_I3: return {ClaimKind::MeanCurvature, 0.0};
    case FamilyId::T1_II: return {ClaimKind::MeanCurvature, fam.constant("H0")};
    case FamilyId::T2_I1:
    case FamilyId::T2_I2:
    case FamilyId::T2_I3: return {ClaimKind::GaussCurvature, 0.0};
    case FamilyId::T2_II1:
    case FamilyId::T2_II2: return {ClaimKind::GaussCurvature, fam.constant("K0")};
  }
  return {};
}

VerificationReport verify_claim(const FactorableSpec& spec, const Claim& claim, const Grid& grid,
                                double tolerance) {
  const SurfacePatch patch = make_patch(spec, grid);
  const auto points = sample(spec.domain, grid);
  std::vector<double> specialized(points.size());
  std::vector<double> generic(points.size());

  parallel_for(points.size(), [&](std::size_t k) {
    const double u = points[k].u;
    const double v = points[k].v;
    const bool mean = claim.kind == ClaimKind::MeanCurvature;
    const double closed =
        mean ? mean_curvature_factorable(spec, u, v) : gauss_curvature_factorable(spec, u, v);
    Curvatures engine;
    try {
      engine = curvatures(fundamental_forms(patch, u, v));
    } catch (const NotAdmissible& e) {
      throw RegularityError(u, v, e.what());
    }
    specialized[k] = std::abs(closed - claim.value);
    generic[k] = std::abs((mean ? engine.H : engine.K) - claim.value);
  });

  VerificationReport report;
  report.claim = claim;
  report.domain = spec.domain;
  report.grid = grid;
  report.tolerance = tolerance;
  bool any_nan = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (std::isnan(specialized[k]) || std::isnan(generic[k])) {
      if (!any_nan) report.worst = points[k];
      any_nan = true;
      continue;
    }
    report.max_residual_specialized = std::max(report.max_residual_specialized, specialized[k]);
    report.max_residual_generic = std::max(report.max_residual_generic, generic[k]);
    const double here = std::max(specialized[k], generic[k]);
    if (here > report.max_residual && !any_nan) {
      report.max_residual = here;
      report.worst = points[k];
    }
  }
  if (any_nan) report.max_residual = std::numeric_limits<double>::quiet_NaN();
  report.pass = !any_nan && report.max_residual <= tolerance;
  return report;
}

VerificationReport verify_family(const FamilySpec& fam, const Grid& grid,
                                 std::optional<double> tolerance) {
  const double tol = tolerance.value_or(is_ode_family(fam.id) ? kOdeTolerance : kClosedFormTolerance);
  return verify_claim(instantiate_family(fam), family_claim(fam), grid, tol);
}

}  // namespace isocurv
