#pragma once

// Second-order forward-mode differentiation for scalar fields of two
// parameters (u, v).

namespace isocurv {

/// Value and partial derivatives up to order two of a scalar field at a point.
/// The mixed partial is stored once.
struct Jet2 {
  double val = 0.0;
  double d_u = 0.0;
  double d_v = 0.0;
  double d_uu = 0.0;
  double d_uv = 0.0;
  double d_vv = 0.0;

  constexpr bool operator==(const Jet2&) const = default;

  constexpr bool is_constant() const {
    return d_u == 0.0 && d_v == 0.0 && d_uu == 0.0 && d_uv == 0.0 && d_vv == 0.0;
  }
};

enum class Seed { U, V, None };

constexpr Jet2 jet_seed(double value, Seed which) {
  switch (which) {
    case Seed::U: return {value, 1.0, 0.0, 0.0, 0.0, 0.0};
    case Seed::V: return {value, 0.0, 1.0, 0.0, 0.0, 0.0};
    case Seed::None: break;
  }
  return {value, 0.0, 0.0, 0.0, 0.0, 0.0};
}

constexpr Jet2 jet_constant(double value) { return jet_seed(value, Seed::None); }

enum class JetOp { Add, Sub, Mul, Div, Pow };
enum class JetFn { Sin, Cos, Tan, Exp, Ln, Sqrt, Neg, Abs };

/// Rejects tan when |cos| falls below this value.
inline constexpr double kDefaultTanPoleMargin = 1e-8;

/// Applies w = phi(a) given phi(a.val), phi'(a.val), phi''(a.val).
constexpr Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  return {f0,
          f1 * a.d_u,
          f1 * a.d_v,
          f2 * a.d_u * a.d_u + f1 * a.d_uu,
          f2 * a.d_u * a.d_v + f1 * a.d_uv,
          f2 * a.d_v * a.d_v + f1 * a.d_vv};
}

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.val + b.val,   a.d_u + b.d_u,   a.d_v + b.d_v,
          a.d_uu + b.d_uu, a.d_uv + b.d_uv, a.d_vv + b.d_vv};
}

constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.val - b.val,   a.d_u - b.d_u,   a.d_v - b.d_v,
          a.d_uu - b.d_uu, a.d_uv - b.d_uv, a.d_vv - b.d_vv};
}

constexpr Jet2 operator-(const Jet2& a) {
  return {-a.val, -a.d_u, -a.d_v, -a.d_uu, -a.d_uv, -a.d_vv};
}

// Terms are grouped symmetrically so that a * b and b * a agree bit for bit.
constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.val * b.val,
          a.d_u * b.val + a.val * b.d_u,
          a.d_v * b.val + a.val * b.d_v,
          (a.d_uu * b.val + a.val * b.d_uu) + 2.0 * (a.d_u * b.d_u),
          (a.d_uv * b.val + a.val * b.d_uv) + (a.d_u * b.d_v + a.d_v * b.d_u),
          (a.d_vv * b.val + a.val * b.d_vv) + 2.0 * (a.d_v * b.d_v)};
}

constexpr Jet2 operator*(double s, const Jet2& a) {
  return {s * a.val, s * a.d_u, s * a.d_v, s * a.d_uu, s * a.d_uv, s * a.d_vv};
}

constexpr Jet2 operator*(const Jet2& a, double s) { return s * a; }

// Division and the transcendental functions validate their domain and throw
// DomainError; they live in jet.cpp.
Jet2 reciprocal(const Jet2& a);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 pow(const Jet2& base, const Jet2& exponent);
Jet2 pow(const Jet2& base, int exponent);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a, double pole_margin = kDefaultTanPoleMargin);
Jet2 exp(const Jet2& a);
Jet2 ln(const Jet2& a);
Jet2 sqrt(const Jet2& a);

Jet2 jet_arith(JetOp op, const Jet2& a, const Jet2& b);
Jet2 jet_func(JetFn fn, const Jet2& a, double pole_margin = kDefaultTanPoleMargin);

}  // namespace isocurv
