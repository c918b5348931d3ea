#include "isocurv/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <system_error>

namespace isocurv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Exp: return "exp";
    case Function::Ln: return "ln";
    case Function::Sqrt: return "sqrt";
  }
  return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
  for (Function fn : {Function::Sin, Function::Cos, Function::Tan, Function::Exp, Function::Ln,
                      Function::Sqrt}) {
    if (function_name(fn) == name) return fn;
  }
  return std::nullopt;
}

double constant_value(NamedConstant c) {
  return c == NamedConstant::Pi ? std::numbers::pi : std::numbers::e;
}

}  // namespace

// --- construction ----------------------------------------------------------

Expr Expr::number(double value) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{NumberNode{value}}));
}
Expr Expr::variable(std::string name) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{VariableNode{std::move(name)}}));
}
Expr Expr::constant(NamedConstant which) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{ConstantNode{which}}));
}
Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{NegateNode{std::move(operand)}}));
}
Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(
      std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(lhs), std::move(rhs)}}));
}
Expr Expr::call(Function fn, Expr argument) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{CallNode{fn, std::move(argument)}}));
}
Expr Expr::table(std::shared_ptr<const TabulatedFunction> fn, std::string label, Expr argument) {
  return Expr(std::make_shared<const ExprNode>(
      ExprNode{TableNode{std::move(fn), std::move(label), std::move(argument)}}));
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::negate(std::move(a)); }

// --- structure -------------------------------------------------------------

bool structurally_equal(const Expr& a, const Expr& b) {
  const auto& ka = a.node().kind;
  const auto& kb = b.node().kind;
  if (ka.index() != kb.index()) return false;
  return std::visit(
      Overloaded{
          [&](const NumberNode& n) { return n.value == std::get<NumberNode>(kb).value; },
          [&](const VariableNode& n) { return n.name == std::get<VariableNode>(kb).name; },
          [&](const ConstantNode& n) { return n.which == std::get<ConstantNode>(kb).which; },
          [&](const NegateNode& n) {
            return structurally_equal(n.operand, std::get<NegateNode>(kb).operand);
          },
          [&](const BinaryNode& n) {
            const auto& o = std::get<BinaryNode>(kb);
            return n.op == o.op && structurally_equal(n.lhs, o.lhs) &&
                   structurally_equal(n.rhs, o.rhs);
          },
          [&](const CallNode& n) {
            const auto& o = std::get<CallNode>(kb);
            return n.fn == o.fn && structurally_equal(n.argument, o.argument);
          },
          [&](const TableNode& n) {
            const auto& o = std::get<TableNode>(kb);
            return n.fn == o.fn && structurally_equal(n.argument, o.argument);
          },
      },
      ka);
}

namespace {

// Binding strength used by the printer; higher binds tighter.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kPrimary = 5;

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

struct Printed {
  std::string text;
  int strength;
};

Printed print(const Expr& e);

std::string wrap(const Expr& e, int min_strength) {
  Printed p = print(e);
  return p.strength >= min_strength ? p.text : "(" + p.text + ")";
}

Printed print(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const NumberNode& n) -> Printed {
            return {format_number(n.value), n.value < 0 || std::signbit(n.value) ? kUnary : kPrimary};
          },
          [](const VariableNode& n) -> Printed { return {n.name, kPrimary}; },
          [](const ConstantNode& n) -> Printed {
            return {n.which == NamedConstant::Pi ? "pi" : "e", kPrimary};
          },
          [](const NegateNode& n) -> Printed { return {"-" + wrap(n.operand, kUnary), kUnary}; },
          [](const BinaryNode& n) -> Printed {
            switch (n.op) {
              case BinaryOp::Add: return {wrap(n.lhs, kSum) + " + " + wrap(n.rhs, kProduct), kSum};
              case BinaryOp::Sub: return {wrap(n.lhs, kSum) + " - " + wrap(n.rhs, kProduct), kSum};
              case BinaryOp::Mul:
                return {wrap(n.lhs, kProduct) + "*" + wrap(n.rhs, kUnary), kProduct};
              case BinaryOp::Div:
                return {wrap(n.lhs, kProduct) + "/" + wrap(n.rhs, kUnary), kProduct};
              case BinaryOp::Pow: return {wrap(n.lhs, kPrimary) + "^" + wrap(n.rhs, kUnary), kPower};
            }
            return {"?", kPrimary};
          },
          [](const CallNode& n) -> Printed {
            return {std::string(function_name(n.fn)) + "(" + print(n.argument).text + ")", kPrimary};
          },
          [](const TableNode& n) -> Printed {
            return {n.label + "(" + print(n.argument).text + ")", kPrimary};
          },
      },
      e.node().kind);
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  std::visit(Overloaded{
                 [&](const VariableNode& n) { out.insert(n.name); },
                 [&](const NegateNode& n) { collect_variables(n.operand, out); },
                 [&](const BinaryNode& n) {
                   collect_variables(n.lhs, out);
                   collect_variables(n.rhs, out);
                 },
                 [&](const CallNode& n) { collect_variables(n.argument, out); },
                 [&](const TableNode& n) { collect_variables(n.argument, out); },
                 [](const auto&) {},
             },
             e.node().kind);
}

}  // namespace

std::string to_string(const Expr& e) { return print(e).text; }

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  return std::visit(
      Overloaded{
          [&](const VariableNode& n) -> Expr {
            auto it = replacements.find(n.name);
            return it != replacements.end() ? it->second : e;
          },
          [&](const NegateNode& n) -> Expr {
            return Expr::negate(substitute(n.operand, replacements));
          },
          [&](const BinaryNode& n) -> Expr {
            return Expr::binary(n.op, substitute(n.lhs, replacements),
                                substitute(n.rhs, replacements));
          },
          [&](const CallNode& n) -> Expr {
            return Expr::call(n.fn, substitute(n.argument, replacements));
          },
          [&](const TableNode& n) -> Expr {
            return Expr::table(n.fn, n.label, substitute(n.argument, replacements));
          },
          [&](const auto&) -> Expr { return e; },
      },
      e.node().kind);
}

// --- parsing ---------------------------------------------------------------

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::UnexpectedToken: return "UnexpectedToken";
    case DiagnosticKind::UnknownIdentifier: return "UnknownIdentifier";
    case DiagnosticKind::UnbalancedParen: return "UnbalancedParen";
    case DiagnosticKind::EmptyInput: return "EmptyInput";
  }
  return "?";
}

ParseError::ParseError(ParseDiagnostic diagnostic)
    : Error(std::string(to_string(diagnostic.kind)) + " at offset " +
            std::to_string(diagnostic.offset) + ": " + diagnostic.message),
      diagnostic_(std::move(diagnostic)) {}

namespace {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Invalid };

struct Token {
  TokenKind kind = TokenKind::End;
  std::size_t offset = 0;
  std::string_view text;
  double value = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view input) : input_(input) {}

  Token next() {
    while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_]))) ++pos_;
    Token tok;
    tok.offset = pos_;
    if (pos_ >= input_.size()) return tok;

    const char c = input_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_ + 1;
      while (end < input_.size() &&
             (std::isalnum(static_cast<unsigned char>(input_[end])) || input_[end] == '_')) {
        ++end;
      }
      tok.kind = TokenKind::Ident;
      tok.text = input_.substr(pos_, end - pos_);
      pos_ = end;
      return tok;
    }
    tok.text = input_.substr(pos_, 1);
    ++pos_;
    switch (c) {
      case '+': tok.kind = TokenKind::Plus; break;
      case '-': tok.kind = TokenKind::Minus; break;
      case '*': tok.kind = TokenKind::Star; break;
      case '/': tok.kind = TokenKind::Slash; break;
      case '^': tok.kind = TokenKind::Caret; break;
      case '(': tok.kind = TokenKind::LParen; break;
      case ')': tok.kind = TokenKind::RParen; break;
      default: tok.kind = TokenKind::Invalid; break;
    }
    return tok;
  }

 private:
  Token number() {
    Token tok;
    tok.offset = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < input_.size() && std::isdigit(static_cast<unsigned char>(input_[end]))) ++end;
    };
    digits();
    if (end < input_.size() && input_[end] == '.') {
      ++end;
      digits();
    }
    // Exponent only when followed by digits, so "2*e" style input is left alone.
    if (end < input_.size() && (input_[end] == 'e' || input_[end] == 'E')) {
      std::size_t probe = end + 1;
      if (probe < input_.size() && (input_[probe] == '+' || input_[probe] == '-')) ++probe;
      if (probe < input_.size() && std::isdigit(static_cast<unsigned char>(input_[probe]))) {
        end = probe;
        digits();
      }
    }
    tok.text = input_.substr(pos_, end - pos_);
    const char* first = input_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, input_.data() + end, tok.value);
    tok.kind = (ec == std::errc{} && ptr == input_.data() + end) ? TokenKind::Number
                                                                  : TokenKind::Invalid;
    pos_ = end;
    return tok;
  }

  std::string_view input_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view input, const std::set<std::string, std::less<>>& allowed)
      : lexer_(input), input_(input), allowed_(allowed) {
    advance();
  }

  ParseResult run() {
    if (current_.kind == TokenKind::End) {
      return ParseDiagnostic{0, "empty expression", DiagnosticKind::EmptyInput};
    }
    auto e = expression();
    if (!e) return *error_;
    if (current_.kind == TokenKind::RParen) {
      return ParseDiagnostic{current_.offset, "unmatched ')'", DiagnosticKind::UnbalancedParen};
    }
    if (current_.kind != TokenKind::End) return unexpected();
    return *e;
  }

 private:
  static constexpr int kMaxDepth = 200;

  void advance() { current_ = lexer_.next(); }

  ParseDiagnostic unexpected() {
    if (current_.kind == TokenKind::End) {
      return {current_.offset, "unexpected end of input", DiagnosticKind::UnexpectedToken};
    }
    return {current_.offset, "unexpected '" + std::string(current_.text) + "'",
            DiagnosticKind::UnexpectedToken};
  }

  std::optional<Expr> fail(ParseDiagnostic d) {
    if (!error_) error_ = std::move(d);
    return std::nullopt;
  }

  std::optional<Expr> expression() {
    if (++depth_ > kMaxDepth) {
      return fail({current_.offset, "expression nested too deeply", DiagnosticKind::UnexpectedToken});
    }
    auto lhs = term();
    while (lhs && (current_.kind == TokenKind::Plus || current_.kind == TokenKind::Minus)) {
      const BinaryOp op = current_.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      auto rhs = term();
      if (!rhs) return std::nullopt;
      lhs = Expr::binary(op, *lhs, *rhs);
    }
    --depth_;
    return lhs;
  }

  std::optional<Expr> term() {
    auto lhs = unary();
    while (lhs && (current_.kind == TokenKind::Star || current_.kind == TokenKind::Slash)) {
      const BinaryOp op = current_.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      auto rhs = unary();
      if (!rhs) return std::nullopt;
      lhs = Expr::binary(op, *lhs, *rhs);
    }
    return lhs;
  }

  std::optional<Expr> unary() {
    if (current_.kind == TokenKind::Minus) {
      if (++depth_ > kMaxDepth) {
        return fail({current_.offset, "expression nested too deeply", DiagnosticKind::UnexpectedToken});
      }
      advance();
      auto operand = unary();
      --depth_;
      if (!operand) return std::nullopt;
      return Expr::negate(*operand);
    }
    return power();
  }

  std::optional<Expr> power() {
    auto base = primary();
    if (base && current_.kind == TokenKind::Caret) {
      advance();
      auto exponent = unary();
      if (!exponent) return std::nullopt;
      return Expr::binary(BinaryOp::Pow, *base, *exponent);
    }
    return base;
  }

  std::optional<Expr> parenthesized() {
    const std::size_t open = current_.offset;
    advance();
    auto inner = expression();
    if (!inner) return std::nullopt;
    if (current_.kind != TokenKind::RParen) {
      if (current_.kind == TokenKind::End) {
        return fail({open, "'(' is never closed", DiagnosticKind::UnbalancedParen});
      }
      return fail(unexpected());
    }
    advance();
    return inner;
  }

  std::optional<Expr> primary() {
    switch (current_.kind) {
      case TokenKind::Number: {
        auto e = Expr::number(current_.value);
        advance();
        return e;
      }
      case TokenKind::LParen: return parenthesized();
      case TokenKind::Ident: return identifier();
      default: return fail(unexpected());
    }
  }

  std::optional<Expr> identifier() {
    const Token name = current_;
    advance();
    if (current_.kind == TokenKind::LParen) {
      auto fn = function_from_name(name.text);
      if (!fn) {
        return fail({name.offset, "unknown function '" + std::string(name.text) + "'",
                     DiagnosticKind::UnknownIdentifier});
      }
      auto arg = parenthesized();
      if (!arg) return std::nullopt;
      return Expr::call(*fn, *arg);
    }
    if (allowed_.contains(name.text)) return Expr::variable(std::string(name.text));
    if (name.text == "pi") return Expr::constant(NamedConstant::Pi);
    if (name.text == "e") return Expr::constant(NamedConstant::E);
    if (function_from_name(name.text)) return fail(unexpected());
    return fail({name.offset, "unknown identifier '" + std::string(name.text) + "'",
                 DiagnosticKind::UnknownIdentifier});
  }

  Lexer lexer_;
  std::string_view input_;
  const std::set<std::string, std::less<>>& allowed_;
  Token current_;
  std::optional<ParseDiagnostic> error_;
  int depth_ = 0;
};

}  // namespace

ParseResult parse(std::string_view input, const std::set<std::string, std::less<>>& allowed_vars) {
  return Parser(input, allowed_vars).run();
}

Expr parse_or_throw(std::string_view input, const std::set<std::string, std::less<>>& allowed_vars) {
  auto result = parse(input, allowed_vars);
  if (auto* d = std::get_if<ParseDiagnostic>(&result)) throw ParseError(std::move(*d));
  return std::get<Expr>(std::move(result));
}

// --- evaluation ------------------------------------------------------------

Jet2 eval_jet(const Expr& e, const JetBindings& bindings) {
  return std::visit(
      Overloaded{
          [](const NumberNode& n) { return jet_constant(n.value); },
          [&](const VariableNode& n) {
            auto it = bindings.find(n.name);
            if (it == bindings.end()) throw UnboundVariable("unbound variable '" + n.name + "'");
            return it->second;
          },
          [](const ConstantNode& n) { return jet_constant(constant_value(n.which)); },
          [&](const NegateNode& n) { return -eval_jet(n.operand, bindings); },
          [&](const BinaryNode& n) {
            const Jet2 a = eval_jet(n.lhs, bindings);
            const Jet2 b = eval_jet(n.rhs, bindings);
            switch (n.op) {
              case BinaryOp::Add: return a + b;
              case BinaryOp::Sub: return a - b;
              case BinaryOp::Mul: return a * b;
              case BinaryOp::Div: return a / b;
              case BinaryOp::Pow: return pow(a, b);
            }
            throw UnsupportedFunction("unknown operator");
          },
          [&](const CallNode& n) {
            const Jet2 a = eval_jet(n.argument, bindings);
            switch (n.fn) {
              case Function::Sin: return sin(a);
              case Function::Cos: return cos(a);
              case Function::Tan: return tan(a);
              case Function::Exp: return exp(a);
              case Function::Ln: return ln(a);
              case Function::Sqrt: return sqrt(a);
            }
            throw UnsupportedFunction("unknown function");
          },
          [&](const TableNode& n) {
            const Jet2 a = eval_jet(n.argument, bindings);
            const auto v = n.fn->evaluate(a.val);
            return chain(a, v.g, v.dg, v.d2g);
          },
      },
      e.node().kind);
}

double eval_scalar(const Expr& e, const ScalarBindings& bindings) {
  return std::visit(
      Overloaded{
          [](const NumberNode& n) { return n.value; },
          [&](const VariableNode& n) {
            auto it = bindings.find(n.name);
            if (it == bindings.end()) throw UnboundVariable("unbound variable '" + n.name + "'");
            return it->second;
          },
          [](const ConstantNode& n) { return constant_value(n.which); },
          [&](const NegateNode& n) { return -eval_scalar(n.operand, bindings); },
          [&](const BinaryNode& n) {
            const double a = eval_scalar(n.lhs, bindings);
            const double b = eval_scalar(n.rhs, bindings);
            switch (n.op) {
              case BinaryOp::Add: return a + b;
              case BinaryOp::Sub: return a - b;
              case BinaryOp::Mul: return a * b;
              case BinaryOp::Div:
                if (b == 0.0) throw DomainError("division by zero");
                return a / b;
              case BinaryOp::Pow: {
                if (a == 0.0 && b < 0.0) throw DomainError("zero raised to a negative power");
                if (a < 0.0 && b != std::nearbyint(b)) {
                  throw DomainError("non-integer power of negative base");
                }
                return std::pow(a, b);
              }
            }
            throw UnsupportedFunction("unknown operator");
          },
          [&](const CallNode& n) {
            const double a = eval_scalar(n.argument, bindings);
            switch (n.fn) {
              case Function::Sin: return std::sin(a);
              case Function::Cos: return std::cos(a);
              case Function::Tan:
                if (std::abs(std::cos(a)) < kDefaultTanPoleMargin) {
                  throw DomainError("tan evaluated at a pole");
                }
                return std::tan(a);
              case Function::Exp: return std::exp(a);
              case Function::Ln:
                if (!(a > 0.0)) throw DomainError("ln of non-positive value");
                return std::log(a);
              case Function::Sqrt:
                if (!(a >= 0.0)) throw DomainError("sqrt of negative value");
                return std::sqrt(a);
            }
            throw UnsupportedFunction("unknown function");
          },
          [&](const TableNode& n) { return n.fn->evaluate(eval_scalar(n.argument, bindings)).g; },
      },
      e.node().kind);
}

}  // namespace isocurv
