#include "isocurv/factorable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isocurv/errors.hpp"

namespace isocurv {

namespace {

std::string single_variable(const Expr& e, const char* fallback, const char* which) {
  const auto vars = free_variables(e);
  if (vars.size() > 1) {
    throw std::invalid_argument(std::string(which) + " must depend on a single variable, got " +
                                std::to_string(vars.size()));
  }
  return vars.empty() ? std::string(fallback) : *vars.begin();
}

}  // namespace

const char* first_parameter(FactorableType type) {
  return type == FactorableType::Phi3 ? "y" : "x";
}

FactorableSpec FactorableSpec::from_exprs(FactorableType type, Expr f, Expr g, Domain domain) {
  domain.validate();
  std::string f_var = single_variable(f, first_parameter(type), "f");
  std::string g_var = single_variable(g, "z", "g");
  return FactorableSpec{type, std::move(f), std::move(f_var), std::move(g), std::move(g_var), domain};
}

FactorableSpec FactorableSpec::parse(FactorableType type, std::string_view f, std::string_view g,
                                     Domain domain) {
  return from_exprs(type, parse_or_throw(f, {"x", "y", "t"}), parse_or_throw(g, {"z", "t"}), domain);
}

FactorValues factor_values(const FactorableSpec& spec, double s, double z) {
  const Jet2 f = eval_jet(spec.f, JetBindings{{spec.f_var, jet_seed(s, Seed::U)}});
  const Jet2 g = eval_jet(spec.g, JetBindings{{spec.g_var, jet_seed(z, Seed::U)}});
  if (!(std::abs(f.val) > kRegularityFloor)) throw RegularityError(s, z, "f vanishes");
  if (!(std::abs(g.d_u) > kRegularityFloor)) throw RegularityError(s, z, "g' vanishes");
  return {f.val, f.d_u, f.d_uu, g.val, g.d_u, g.d_uu};
}

void check_regularity(const FactorableSpec& spec, const Grid& grid) {
  for (const auto& p : sample(spec.domain, grid)) factor_values(spec, p.u, p.v);
}

SurfacePatch make_patch(const FactorableSpec& spec, const Grid& grid) {
  check_regularity(spec, grid);
  return embed(spec);
}

SurfacePatch embed(const FactorableSpec& spec) {
  const std::string first = first_parameter(spec.type);
  const Expr f = substitute(spec.f, {{spec.f_var, Expr::variable(first)}});
  const Expr g = substitute(spec.g, {{spec.g_var, Expr::variable("z")}});
  const Expr product = f * g;
  if (spec.type == FactorableType::Phi3) {
    return SurfacePatch({product, Expr::variable("y"), Expr::variable("z")}, "y", "z", spec.domain);
  }
  return SurfacePatch({Expr::variable("x"), product, Expr::variable("z")}, "x", "z", spec.domain);
}

double minimal_residual(const FactorValues& v) {
  const double fg = v.df * v.g;
  return (fg * fg + 1.0) * v.d2g + v.g * v.dg * v.dg * (v.f * v.d2f - 2.0 * v.df * v.df);
}

double flat_residual(const FactorValues& v) {
  const double dfdg = v.df * v.dg;
  return v.f * v.g * v.d2f * v.d2g - dfdg * dfdg;
}

double mean_curvature_factorable(const FactorableSpec& spec, double s, double z) {
  const FactorValues v = factor_values(spec, s, z);
  return minimal_residual(v) / (2.0 * v.f * v.f * v.dg * v.dg * v.dg);
}

double gauss_curvature_factorable(const FactorableSpec& spec, double s, double z) {
  const FactorValues v = factor_values(spec, s, z);
  const double fdg = v.f * v.dg;
  const double fdg2 = fdg * fdg;
  return flat_residual(v) / (fdg2 * fdg2);
}

TypeComparison compare_types(const Expr& f, const Expr& g, const Domain& domain, const Grid& grid) {
  const auto phi2 = make_patch(FactorableSpec::from_exprs(FactorableType::Phi2, f, g, domain), grid);
  const auto phi3 = make_patch(FactorableSpec::from_exprs(FactorableType::Phi3, f, g, domain), grid);
  const auto a = evaluate_grid(phi2, grid);
  const auto b = evaluate_grid(phi3, grid);

  TypeComparison out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].curv || !b[k].curv) {
      throw RegularityError(a[k].at.u, a[k].at.v,
                            "curvature undefined: " + (a[k].curv ? b[k].error : a[k].error));
    }
    const Curvatures& c2 = *a[k].curv;
    const Curvatures& c3 = *b[k].curv;
    out.max_K_diff = std::max(out.max_K_diff, std::abs(c2.K - c3.K));
    out.max_absH_diff = std::max(out.max_absH_diff, std::abs(std::abs(c2.H) - std::abs(c3.H)));
    out.max_signedH_diff = std::max(out.max_signedH_diff, std::abs(c2.H - c3.H));
  }
  return out;
}

}  // namespace isocurv
