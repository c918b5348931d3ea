#pragma once

// Formula strings for coordinate functions.
//
// Grammar, loosest to tightest:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan exp ln sqrt. Constants: pi e. Implicit
// multiplication is not accepted, and "-y^2" is -(y^2).

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "isocurv/errors.hpp"
#include "isocurv/jet.hpp"
#include "isocurv/tabulated.hpp"

namespace isocurv {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Tan, Exp, Ln, Sqrt };
enum class NamedConstant { Pi, E };

struct ExprNode;

/// Immutable expression tree handle. Copies share structure.
class Expr {
 public:
  static Expr number(double value);
  static Expr variable(std::string name);
  static Expr constant(NamedConstant which);
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr argument);
  /// Application of a tabulated univariate function; printed as label(arg).
  static Expr table(std::shared_ptr<const TabulatedFunction> fn, std::string label, Expr argument);

  const ExprNode& node() const { return *node_; }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct NumberNode {
  double value;
};
struct VariableNode {
  std::string name;
};
struct ConstantNode {
  NamedConstant which;
};
struct NegateNode {
  Expr operand;
};
struct BinaryNode {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct CallNode {
  Function fn;
  Expr argument;
};
struct TableNode {
  std::shared_ptr<const TabulatedFunction> fn;
  std::string label;
  Expr argument;
};

struct ExprNode {
  std::variant<NumberNode, VariableNode, ConstantNode, NegateNode, BinaryNode, CallNode, TableNode>
      kind;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

/// Same shape, same literals, same names. Table nodes compare by identity.
bool structurally_equal(const Expr& a, const Expr& b);

/// Text that parses back to a structurally identical tree (table nodes excepted).
std::string to_string(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

/// Replaces variables by expressions; unmapped variables are kept.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

// --- parsing ---------------------------------------------------------------

enum class DiagnosticKind { UnexpectedToken, UnknownIdentifier, UnbalancedParen, EmptyInput };

struct ParseDiagnostic {
  std::size_t offset = 0;
  std::string message;
  DiagnosticKind kind = DiagnosticKind::UnexpectedToken;
};

const char* to_string(DiagnosticKind kind);

using ParseResult = std::variant<Expr, ParseDiagnostic>;

ParseResult parse(std::string_view input, const std::set<std::string, std::less<>>& allowed_vars);

class ParseError : public Error {
 public:
  explicit ParseError(ParseDiagnostic diagnostic);
  const ParseDiagnostic& diagnostic() const { return diagnostic_; }

 private:
  ParseDiagnostic diagnostic_;
};

/// parse() that throws ParseError on failure.
Expr parse_or_throw(std::string_view input, const std::set<std::string, std::less<>>& allowed_vars);

// --- evaluation ------------------------------------------------------------

using JetBindings = std::map<std::string, Jet2, std::less<>>;
using ScalarBindings = std::map<std::string, double, std::less<>>;

/// Exact 2-jet of the expression. Throws DomainError or UnboundVariable.
Jet2 eval_jet(const Expr& e, const JetBindings& bindings);

/// Plain double evaluation through <cmath>, independent of the jet code.
double eval_scalar(const Expr& e, const ScalarBindings& bindings);

}  // namespace isocurv
