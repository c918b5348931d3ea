#pragma once

#include <stdexcept>
#include <string>

namespace isocurv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its domain (ln of a non-positive value,
/// division by zero, tan at a pole, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The function is not smooth enough to carry second derivatives (abs).
class UnsupportedFunction : public Error {
 public:
  using Error::Error;
};

/// An expression references a variable that has no binding.
class UnboundVariable : public Error {
 public:
  using Error::Error;
};

/// The tangent plane is isotropic (EG - F^2 at or below the admissibility floor).
class NotAdmissible : public Error {
 public:
  NotAdmissible(double u, double v, double w)
      : Error("surface is not admissible at (" + std::to_string(u) + ", " +
              std::to_string(v) + "): EG-F^2 = " + std::to_string(w)),
        u_(u), v_(v), w_(w) {}

  double u() const { return u_; }
  double v() const { return v_; }
  double discriminant() const { return w_; }

 private:
  double u_, v_, w_;
};

/// A factorable surface violates f != 0 or g' != 0.
class RegularityError : public Error {
 public:
  RegularityError(double first, double second, const std::string& what)
      : Error(what + " at (" + std::to_string(first) + ", " +
              std::to_string(second) + ")"),
        first_(first), second_(second) {}

  double first() const { return first_; }
  double second() const { return second_; }

 private:
  double first_, second_;
};

/// Family constants (or the family's domain) violate the family's constraints.
class InvalidConstants : public Error {
 public:
  using Error::Error;
};

class BlowUp : public Error {
 public:
  using Error::Error;
};

class RadicandNonpositive : public Error {
 public:
  using Error::Error;
};

}  // namespace isocurv
