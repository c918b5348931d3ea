#include "isocurv/jet.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "isocurv/errors.hpp"

namespace isocurv {

Jet2 reciprocal(const Jet2& a) {
  if (a.val == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / a.val;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.val == 0.0) throw DomainError("division by zero");
  return a * reciprocal(b);
}

Jet2 pow(const Jet2& base, int exponent) {
  if (exponent < 0) {
    if (base.val == 0.0) throw DomainError("zero raised to a negative power");
    // base^-n = 1 / (base^(n-1) * base); written this way so INT_MIN cannot overflow.
    return reciprocal(pow(base, -(exponent + 1)) * base);
  }
  Jet2 result = jet_constant(1.0);
  Jet2 square = base;
  for (unsigned n = static_cast<unsigned>(exponent); n != 0; n >>= 1) {
    if (n & 1U) result = result * square;
    if (n > 1) square = square * square;
  }
  return result;
}

Jet2 pow(const Jet2& base, const Jet2& exponent) {
  if (exponent.is_constant()) {
    const double p = exponent.val;
    if (std::isfinite(p) && p == std::nearbyint(p) &&
        std::abs(p) <= static_cast<double>(std::numeric_limits<int>::max())) {
      return pow(base, static_cast<int>(p));
    }
  }
  if (!(base.val > 0.0)) {
    throw DomainError("non-integer power of non-positive base " + std::to_string(base.val));
  }
  return exp(exponent * ln(base));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.val);
  return chain(a, s, std::cos(a.val), -s);
}

Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.val);
  return chain(a, c, -std::sin(a.val), -c);
}

Jet2 tan(const Jet2& a, double pole_margin) {
  const double c = std::cos(a.val);
  if (std::abs(c) < pole_margin) {
    throw DomainError("tan evaluated at a pole (cos = " + std::to_string(c) + ")");
  }
  const double t = std::sin(a.val) / c;
  const double sec2 = 1.0 / (c * c);
  return chain(a, t, sec2, 2.0 * sec2 * t);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.val);
  return chain(a, e, e, e);
}

Jet2 ln(const Jet2& a) {
  if (!(a.val > 0.0)) throw DomainError("ln of non-positive value " + std::to_string(a.val));
  const double inv = 1.0 / a.val;
  return chain(a, std::log(a.val), inv, -inv * inv);
}

Jet2 sqrt(const Jet2& a) {
  if (!(a.val > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(a.val));
  const double s = std::sqrt(a.val);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.val));
}

Jet2 jet_arith(JetOp op, const Jet2& a, const Jet2& b) {
  switch (op) {
    case JetOp::Add: return a + b;
    case JetOp::Sub: return a - b;
    case JetOp::Mul: return a * b;
    case JetOp::Div: return a / b;
    case JetOp::Pow: return pow(a, b);
  }
  throw UnsupportedFunction("unknown jet operation");
}

Jet2 jet_func(JetFn fn, const Jet2& a, double pole_margin) {
  switch (fn) {
    case JetFn::Sin: return sin(a);
    case JetFn::Cos: return cos(a);
    case JetFn::Tan: return tan(a, pole_margin);
    case JetFn::Exp: return exp(a);
    case JetFn::Ln: return ln(a);
    case JetFn::Sqrt: return sqrt(a);
    case JetFn::Neg: return -a;
    case JetFn::Abs: break;
  }
  throw UnsupportedFunction("abs is not differentiable at the origin and is not supported");
}

}  // namespace isocurv
