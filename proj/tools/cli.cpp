#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "criteria.hpp"
#include "isocurv/errors.hpp"
#include "isocurv/expr.hpp"
#include "isocurv/factorable.hpp"
#include "isocurv/families.hpp"
#include "isocurv/geometry.hpp"
#include "isocurv/probe.hpp"

namespace isocurv::cli {
namespace {

/// Configuration problem that maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Parses `text` and reports failures as UsageError with the offset shifted
/// by `base`, so that it points into the original option value.
Expr parse_at(std::string_view option, std::string_view whole, std::string_view text, std::size_t base,
              const std::set<std::string, std::less<>>& vars) {
  auto result = parse(text, vars);
  if (auto* d = std::get_if<ParseDiagnostic>(&result)) {
    const std::size_t at = base + d->offset;
    std::ostringstream msg;
    msg << option << ": " << to_string(d->kind) << " at offset " << at << ": " << d->message << "\n  "
        << whole << "\n  " << std::string(at, ' ') << '^';
    throw UsageError(msg.str());
  }
  return std::get<Expr>(std::move(result));
}

double parse_number(std::string_view option, std::string_view text) {
  const std::string_view t = trim(text);
  const Expr e = parse_at(option, text, t, static_cast<std::size_t>(t.data() - text.data()), {});
  try {
    return eval_scalar(e, {});
  } catch (const Error& ex) {
    throw UsageError(std::string(option) + ": " + ex.what());
  }
}

Domain parse_domain(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view piece = std::string_view(text).substr(start, comma - start);
    values.push_back(parse_number("--domain", piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.size() != 4) throw UsageError("--domain expects four values u_min,u_max,v_min,v_max");
  const Domain d{values[0], values[1], values[2], values[3]};
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--domain: ") + e.what());
  }
  return d;
}

Grid parse_grid(const std::string& text, double margin) {
  std::size_t nu = 0, nv = 0;
  char x = 0, extra = 0;
  if (std::sscanf(text.c_str(), "%zu%c%zu%c", &nu, &x, &nv, &extra) != 3 || (x != 'x' && x != 'X')) {
    throw UsageError("--grid expects NxM, got '" + text + "'");
  }
  const Grid g{nu, nv, margin};
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  return g;
}

/// "f=<expr>; g=<expr>" in either order.
FactorableSpec parse_factorable(FactorableType type, const std::string& text, const Domain& domain) {
  const std::string option = type == FactorableType::Phi3 ? "--phi3" : "--phi2";
  std::optional<Expr> f, g;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t semi = std::min(text.find(';', start), text.size());
    const std::string_view part = std::string_view(text).substr(start, semi - start);
    const std::string_view body = trim(part);
    const std::size_t base = start + static_cast<std::size_t>(body.data() - part.data());
    if (!body.empty()) {
      const std::size_t eq = body.find('=');
      const std::string_view name = eq == std::string_view::npos ? body : trim(body.substr(0, eq));
      if (eq == std::string_view::npos || (name != "f" && name != "g")) {
        throw UsageError(option + ": expected f=<expr> or g=<expr> at offset " + std::to_string(base));
      }
      const std::size_t expr_base = base + eq + 1;
      const std::string_view expr = body.substr(eq + 1);
      auto& slot = name == "f" ? f : g;
      if (slot) throw UsageError(option + ": " + std::string(name) + " given twice");
      slot = parse_at(option, text, expr, expr_base,
                      name == "f" ? std::set<std::string, std::less<>>{"x", "y", "t"}
                                  : std::set<std::string, std::less<>>{"z", "t"});
    }
    start = semi + 1;
  }
  if (!f || !g) throw UsageError(option + ": both f=<expr> and g=<expr> are required");
  try {
    return FactorableSpec::from_exprs(type, *f, *g, domain);
  } catch (const Error& e) {
    throw UsageError(option + ": " + e.what());
  }
}

/// "x;y;z" in the parameters u and v.
SurfacePatch parse_coords(const std::string& text, const Domain& domain) {
  std::vector<Expr> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t semi = text.find(';', start);
    const std::string_view part = std::string_view(text).substr(start, semi - start);
    parts.push_back(parse_at("--coords", text, part, start, {"u", "v"}));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (parts.size() != 3) throw UsageError("--coords expects three expressions x;y;z");
  return SurfacePatch({parts[0], parts[1], parts[2]}, "u", "v", domain);
}

struct SurfaceOptions {
  std::string phi3, phi2, coords;
  std::string domain = "1,2,1,2";
  std::string grid = "64x64";
  double margin = Grid{}.margin;

  void add_to(CLI::App& app, bool allow_coords) {
    auto* group = app.add_option_group("surface", "surface selection");
    group->add_option("--phi3", phi3, "x = f(y) g(z), given as \"f=<expr>; g=<expr>\"");
    group->add_option("--phi2", phi2, "y = f(x) g(z), given as \"f=<expr>; g=<expr>\"");
    if (allow_coords) group->add_option("--coords", coords, "three expressions \"x;y;z\" in u and v");
    group->require_option(1);
    app.add_option("--domain", domain, "a,b,c,d for [a,b] x [c,d]; entries may be expressions")
        ->capture_default_str();
    app.add_option("--grid", grid, "sample resolution NxM")->capture_default_str();
    app.add_option("--margin", margin, "fraction of each span left out at the domain edges")
        ->capture_default_str();
  }

  bool factorable() const { return coords.empty(); }

  FactorableSpec factorable_spec() const {
    return phi3.empty() ? parse_factorable(FactorableType::Phi2, phi2, parse_domain(domain))
                        : parse_factorable(FactorableType::Phi3, phi3, parse_domain(domain));
  }

  SurfacePatch patch() const {
    return factorable() ? embed(factorable_spec()) : parse_coords(coords, parse_domain(domain));
  }
};

/// Output sink: the named file, or `out` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : stream_(&out) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// --- curvature -------------------------------------------------------------

struct CurvatureCommand {
  SurfaceOptions surface;
  std::string output;

  void add_to(CLI::App& app) {
    surface.add_to(app, true);
    app.add_option("--output,-o", output, "CSV file (default standard output)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    const SurfacePatch patch = surface.patch();
    const Grid grid = parse_grid(surface.grid, surface.margin);
    const auto samples = evaluate_grid(patch, grid);
    for (const auto& s : samples) {
      if (!s.curv) {
        err << (s.not_admissible ? "NotAdmissible: " : "error: ") << s.error << '\n';
        return kExitFailure;
      }
    }
    Sink sink(output, out);
    std::ostream& csv = *sink;
    csv << "u,v,x,y,z,E,F,G,l,m,n,K,H\n";
    for (const auto& s : samples) {
      const auto& f = *s.forms;
      const double row[] = {s.at.u, s.at.v, s.position[0], s.position[1], s.position[2], f.E, f.F, f.G,
                            f.l,    f.m,    f.n,           s.curv->K,     s.curv->H};
      for (std::size_t k = 0; k < std::size(row); ++k) csv << (k ? "," : "") << g17(row[k]);
      csv << '\n';
    }
    return kExitOk;
  }
};

// --- verify ----------------------------------------------------------------

std::map<std::string, double, std::less<>> parse_constants(const std::string& text) {
  std::map<std::string, double, std::less<>> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = trim(std::string_view(text).substr(start, comma - start));
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || trim(item.substr(0, eq)).empty()) {
      throw UsageError("--const expects name=value pairs, got '" + std::string(item) + "'");
    }
    out[std::string(trim(item.substr(0, eq)))] = parse_number("--const", item.substr(eq + 1));
    start = comma + 1;
  }
  return out;
}

struct VerifyCommand {
  std::string family;
  std::string constants;
  std::string domain;
  std::string grid = "64x64";
  double margin = Grid{}.margin;
  std::optional<double> tolerance;
  std::string g_formula;

  void add_to(CLI::App& app) {
    app.add_option("--family", family, "family id (T1_I1 ... T2_II2) or 'all'")->required();
    app.add_option("--const", constants, "comma-separated name=value overrides");
    app.add_option("--domain", domain, "a,b,c,d; defaults to the family's own domain");
    app.add_option("--grid", grid, "sample resolution NxM")->capture_default_str();
    app.add_option("--margin", margin, "fraction of each span left out at the domain edges")
        ->capture_default_str();
    app.add_option("--tol", tolerance, "pass threshold on the maximum residual")
        ->check(CLI::PositiveNumber);
    app.add_option("--g-formula", g_formula, "g(z) for T2_I1 (default exp(z))");
  }

  int run(std::ostream& out, std::ostream& err) const {
    std::vector<FamilyId> ids;
    if (family == "all") {
      if (!constants.empty() || !domain.empty()) {
        throw UsageError("--const and --domain need a single --family");
      }
      ids.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
    } else if (const auto id = parse_family_id(family)) {
      ids.push_back(*id);
    } else {
      throw UsageError("unknown family '" + family + "'");
    }
    const Grid g = parse_grid(grid, margin);
    std::vector<FamilySpec> specs;
    for (FamilyId id : ids) {
      FamilySpec fam;
      fam.id = id;
      fam.constants = parse_constants(constants);
      if (!domain.empty()) fam.domain = parse_domain(domain);
      fam.g_formula = g_formula;
      try {
        instantiate_family(fam);
      } catch (const InvalidConstants& e) {
        throw UsageError(e.what());
      } catch (const ParseError& e) {
        throw UsageError(std::string("--g-formula: ") + e.what());
      }
      specs.push_back(std::move(fam));
    }

    bool all_pass = true;
    for (const FamilySpec& fam : specs) {
      std::ostringstream consts;
      for (const auto& [name, value] : default_constants(fam.id)) {
        consts << (consts.tellp() > 0 ? "," : "") << name << "=" << g17(fam.constant(name));
      }
      out << "family " << to_string(fam.id) << '\n' << "  constants  " << consts.str() << '\n';
      const FamilyFormulas formulas = family_formulas(fam);
      out << "  surface    x = (" << formulas.f << ") * (" << formulas.g << ")\n";
      out << "  domain     " << describe(default_domain(fam)) << '\n'
          << "  grid       " << g.nu << "x" << g.nv << " margin " << g6(g.margin) << '\n';
      try {
        const VerificationReport rep = verify_family(fam, g, tolerance);
        out << "  claim      " << to_string(rep.claim) << '\n'
            << "  residual   closed form " << g6(rep.max_residual_specialized) << ", engine "
            << g6(rep.max_residual_generic) << ", worst at (" << g6(rep.worst.u) << ", " << g6(rep.worst.v)
            << ")\n"
            << "  result     " << (rep.pass ? "PASS" : "FAIL") << '\n';
        out << "RESULT family=" << to_string(fam.id) << " constants=" << consts.str()
            << " claim=" << to_string(rep.claim) << " grid=" << g.nu << "x" << g.nv
            << " max_residual=" << g17(rep.max_residual) << " tolerance=" << g17(rep.tolerance)
            << " pass=" << (rep.pass ? "true" : "false") << '\n';
        all_pass = all_pass && rep.pass;
      } catch (const Error& e) {
        out << "  result     ERROR " << e.what() << '\n';
        out << "RESULT family=" << to_string(fam.id) << " constants=" << consts.str() << " error=\""
            << e.what() << "\" pass=false\n";
        err << to_string(fam.id) << ": " << e.what() << '\n';
        all_pass = false;
      }
    }
    return all_pass ? kExitOk : kExitFailure;
  }
};

// --- generate --------------------------------------------------------------

struct BuiltinExample {
  const char* formula;  // x as a function of y and z
  Domain domain;
};

constexpr double kPi = 3.141592653589793;

const BuiltinExample kExamples[] = {
    {"y*tan(z)", {0, kPi / 3, 0, kPi / 3}},
    {"-sqrt(z)", {0, 2 * kPi, 0, 2 * kPi}},
    {"-y^2/(4*z)", {1, 1.4, 1, 2 * kPi}},
    {"z/y", {1, kPi, 1, 2 * kPi}},
};

struct GenerateCommand {
  SurfaceOptions surface;
  int example = 0;
  std::string format = "obj";
  std::string output;

  void add_to(CLI::App& app) {
    auto* group = app.add_option_group("surface", "surface selection");
    group->add_option("--example", example, "built-in example 1-4 over its own domain");
    group->add_option("--phi3", surface.phi3, "x = f(y) g(z), given as \"f=<expr>; g=<expr>\"");
    group->add_option("--phi2", surface.phi2, "y = f(x) g(z), given as \"f=<expr>; g=<expr>\"");
    group->add_option("--coords", surface.coords, "three expressions \"x;y;z\" in u and v");
    group->require_option(1);
    app.add_option("--domain", surface.domain, "a,b,c,d (explicit surfaces only)")->capture_default_str();
    app.add_option("--grid", surface.grid, "sample resolution NxM")->capture_default_str();
    app.add_option("--margin", margin_, "edge margin; 0 for built-in examples, 1e-3 otherwise");
    app.add_option("--format", format, "obj or csv")
        ->check(CLI::IsMember({"obj", "csv"}))
        ->capture_default_str();
    app.add_option("--output,-o", output, "output file (default standard output)");
  }

  int run(std::ostream& out, std::ostream&) const {
    std::optional<SurfacePatch> patch;
    double margin = surface.margin;
    if (example != 0) {
      if (example < 1 || example > static_cast<int>(std::size(kExamples))) {
        throw UsageError("unknown example " + std::to_string(example) + " (expected 1-4)");
      }
      const BuiltinExample& ex = kExamples[example - 1];
      patch = SurfacePatch::parse(ex.formula, "y", "z", ex.domain, "y", "z");
      margin = 0.0;
    } else {
      patch = surface.patch();
    }
    if (margin_) margin = *margin_;
    const Grid grid = parse_grid(surface.grid, margin);
    const auto points = sample(patch->domain(), grid);
    std::vector<std::array<double, 3>> vertices;
    vertices.reserve(points.size());
    for (const auto& p : points) vertices.push_back(patch->position(p.u, p.v));

    Sink sink(output, out);
    std::ostream& os = *sink;
    if (format == "csv") {
      os << "u,v,x,y,z\n";
      for (std::size_t k = 0; k < points.size(); ++k) {
        os << g17(points[k].u) << ',' << g17(points[k].v) << ',' << g17(vertices[k][0]) << ','
           << g17(vertices[k][1]) << ',' << g17(vertices[k][2]) << '\n';
      }
      return kExitOk;
    }
    for (const auto& v : vertices) os << "v " << g17(v[0]) << ' ' << g17(v[1]) << ' ' << g17(v[2]) << '\n';
    const auto index = [&](std::size_t i, std::size_t j) { return i * grid.nv + j + 1; };
    for (std::size_t i = 0; i + 1 < grid.nu; ++i) {
      for (std::size_t j = 0; j + 1 < grid.nv; ++j) {
        os << "f " << index(i, j) << ' ' << index(i + 1, j) << ' ' << index(i + 1, j + 1) << '\n';
        os << "f " << index(i, j) << ' ' << index(i + 1, j + 1) << ' ' << index(i, j + 1) << '\n';
      }
    }
    return kExitOk;
  }

 private:
  std::optional<double> margin_;
};

// --- probe-ratio -----------------------------------------------------------

struct ProbeCommand {
  SurfaceOptions surface;

  void add_to(CLI::App& app) { surface.add_to(app, false); }

  int run(std::ostream& out, std::ostream&) const {
    const FactorableSpec spec = surface.factorable_spec();
    const Grid grid = parse_grid(surface.grid, surface.margin);
    const RatioProbeReport rep = ratio_probe(spec, grid);
    out << "points " << rep.points << '\n'
        << "max_abs_H " << g17(rep.max_abs_H) << '\n'
        << "max_abs_K " << g17(rep.max_abs_K) << '\n';
    if (rep.degenerate != Degeneracy::None) {
      out << "degenerate: " << to_string(rep.degenerate) << '\n';
      return kExitOk;
    }
    out << "best_lambda " << g17(rep.best_lambda) << '\n'
        << "min_scaled_residual " << g17(rep.min_scaled_residual) << '\n'
        << "ratio_stddev " << g17(rep.ratio_stddev) << '\n';
    return kExitOk;
  }
};

int run_selftest(std::ostream& out) {
  const auto results = acceptance::run_all();
  std::size_t passed = 0;
  for (const auto& r : results) {
    out << acceptance::format(r) << '\n';
    passed += r.pass ? 1 : 0;
  }
  out << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? kExitOk : kExitFailure;
}

/// Replaces "--config FILE" by the file's key=value lines, spliced in as
/// "--key=value" right after the subcommand so later flags override them.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t k = 0; k < args.size(); ++k) {
    std::string path;
    std::size_t consumed = 0;
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a file name");
      path = args[k + 1];
      consumed = 2;
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::string> inserted;
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
      const std::string_view t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      const std::size_t eq = t.find('=');
      if (eq == std::string_view::npos || trim(t.substr(0, eq)).empty()) {
        throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
      }
      inserted.push_back("--" + std::string(trim(t.substr(0, eq))) + "=" + std::string(trim(t.substr(eq + 1))));
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k + consumed));
    const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return a.empty() || a[0] != '-'; });
    if (sub == args.end()) throw UsageError("--config must accompany a subcommand");
    args.insert(sub + 1, inserted.begin(), inserted.end());
    k = 0;
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature of factorable surfaces in isotropic 3-space", "isocurv"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "key=value file; its settings precede the command-line flags");

  CurvatureCommand curvature;
  VerifyCommand verify;
  GenerateCommand generate;
  ProbeCommand probe;
  auto* c_curv = app.add_subcommand("curvature", "evaluate fundamental forms and curvatures on a grid (CSV)");
  curvature.add_to(*c_curv);
  auto* c_verify = app.add_subcommand("verify", "check a constant-curvature family against its claim");
  verify.add_to(*c_verify);
  auto* c_gen = app.add_subcommand("generate", "export a surface as an OBJ mesh or CSV point cloud");
  generate.add_to(*c_gen);
  auto* c_probe = app.add_subcommand("probe-ratio", "search for lambda with H + lambda K = 0");
  probe.add_to(*c_probe);
  auto* c_self = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_curv->parsed()) return curvature.run(out, err);
    if (c_verify->parsed()) return verify.run(out, err);
    if (c_gen->parsed()) return generate.run(out, err);
    if (c_probe->parsed()) return probe.run(out, err);
    if (c_self->parsed()) return run_selftest(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidConstants& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace isocurv::cli
