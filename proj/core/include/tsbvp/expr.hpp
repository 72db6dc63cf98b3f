#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tsbvp/error.hpp"

namespace tsbvp::expr {

// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 't' | 'u' | name '(' expr (',' expr)* ')' | '(' expr ')'
// Names: sin cos exp log sqrt abs (one argument), min max (two arguments).
// Numbers are decimal with an optional exponent. No implicit multiplication.

enum class NodeKind { kNumber, kVar, kNeg, kBinary, kCall };
enum class Var { kT, kU };
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };
enum class Func { kSin, kCos, kExp, kLog, kSqrt, kAbs, kMin, kMax };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::kNumber;
  double number = 0.0;
  Var var = Var::kT;
  BinaryOp op = BinaryOp::kAdd;
  Func func = Func::kSin;
  std::vector<NodePtr> children;
};

NodePtr number(double value);
NodePtr variable(Var v);
NodePtr negate(NodePtr child);
NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr call(Func f, std::vector<NodePtr> args);

int arity(Func f);
std::string_view name(Func f);

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column,
             std::set<std::string> expected = {})
      : Error(what), line_(line), column_(column), expected_(std::move(expected)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::set<std::string> expected_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& what, int line, int column,
                         std::string identifier)
      : ParseError(what, line, column), identifier_(std::move(identifier)) {}
  const std::string& identifier() const noexcept { return identifier_; }

 private:
  std::string identifier_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Immutable parsed expression in the variables t and u.
class Expression {
 public:
  explicit Expression(NodePtr root);

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }
  bool uses(Var v) const;

 private:
  NodePtr root_;
};

Expression parse(std::string_view source);

/// Evaluates with real semantics. Domain faults (log or sqrt of a negative,
/// log of zero, division by zero, zero to a negative power, a non-finite
/// result) throw EvaluationError flagged as a potential singularity.
double eval(const Expression& e, double t, double u);
double eval(const Node& node, double t, double u);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string to_string(const Expression& e);
std::string to_string(const Node& node);

}  // namespace tsbvp::expr
