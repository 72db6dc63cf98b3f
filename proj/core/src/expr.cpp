#include "tsbvp/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>

namespace tsbvp::expr {
namespace {

struct FuncInfo {
  Func func;
  std::string_view name;
  int arity;
};

constexpr std::array<FuncInfo, 8> kFuncs{{
    {Func::kSin, "sin", 1},
    {Func::kCos, "cos", 1},
    {Func::kExp, "exp", 1},
    {Func::kLog, "log", 1},
    {Func::kSqrt, "sqrt", 1},
    {Func::kAbs, "abs", 1},
    {Func::kMin, "min", 2},
    {Func::kMax, "max", 2},
}};

std::optional<Func> lookup_func(std::string_view name) {
  for (const auto& info : kFuncs) {
    if (info.name == name) return info.func;
  }
  return std::nullopt;
}

enum class Tok {
  kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen,
  kComma, kEnd
};

struct Token {
  Tok kind;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& tok) {
  if (tok.kind == Tok::kEnd) return "end of input";
  return "'" + tok.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token tok{Tok::kEnd, "", 0.0, line_, column_};
    if (pos_ >= src_.size()) return tok;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number(tok);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        advance();
      }
      tok.kind = Tok::kIdent;
      tok.text = std::string(src_.substr(start, pos_ - start));
      return tok;
    }
    advance();
    tok.text = std::string(1, c);
    switch (c) {
      case '+': tok.kind = Tok::kPlus; break;
      case '-': tok.kind = Tok::kMinus; break;
      case '*': tok.kind = Tok::kStar; break;
      case '/': tok.kind = Tok::kSlash; break;
      case '^': tok.kind = Tok::kCaret; break;
      case '(': tok.kind = Tok::kLParen; break;
      case ')': tok.kind = Tok::kRParen; break;
      case ',': tok.kind = Tok::kComma; break;
      default:
        throw ParseError("unexpected character '" + tok.text + "' at line " +
                             std::to_string(tok.line) + ", column " +
                             std::to_string(tok.column),
                         tok.line, tok.column);
    }
    return tok;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      advance();
    }
  }

  bool digit_here() const {
    return pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]));
  }

  Token number(Token tok) {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (digit_here()) { advance(); ++digits; }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (digit_here()) { advance(); ++digits; }
    }
    if (digits == 0) {
      throw ParseError("malformed number at line " + std::to_string(tok.line) +
                           ", column " + std::to_string(tok.column),
                       tok.line, tok.column, {"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        advance();
      }
      if (!digit_here()) {
        throw ParseError("exponent without digits at line " +
                             std::to_string(line_) + ", column " +
                             std::to_string(column_),
                         line_, column_, {"digit"});
      }
      while (digit_here()) advance();
    }
    tok.kind = Tok::kNumber;
    tok.text = std::string(src_.substr(start, pos_ - start));
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, tok.value);
    if (ec != std::errc() || ptr != last || !std::isfinite(tok.value)) {
      throw ParseError("number '" + tok.text + "' is out of range at line " +
                           std::to_string(tok.line) + ", column " +
                           std::to_string(tok.column),
                       tok.line, tok.column);
    }
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { tok_ = lexer_.next(); }

  NodePtr parse_all() {
    NodePtr root = parse_expr();
    if (tok_.kind != Tok::kEnd) {
      fail({"+", "-", "*", "/", "^", "end of input"});
    }
    return root;
  }

 private:
  void consume() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(std::set<std::string> expected) {
    std::ostringstream os;
    os << "syntax error at line " << tok_.line << ", column " << tok_.column
       << ": unexpected " << describe(tok_) << ", expected one of:";
    for (const auto& e : expected) os << " " << e;
    throw ParseError(os.str(), tok_.line, tok_.column, std::move(expected));
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (tok_.kind == Tok::kPlus || tok_.kind == Tok::kMinus) {
      const BinaryOp op = tok_.kind == Tok::kPlus ? BinaryOp::kAdd : BinaryOp::kSub;
      consume();
      lhs = binary(op, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (tok_.kind == Tok::kStar || tok_.kind == Tok::kSlash) {
      const BinaryOp op = tok_.kind == Tok::kStar ? BinaryOp::kMul : BinaryOp::kDiv;
      consume();
      lhs = binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  NodePtr parse_unary() {
    if (tok_.kind == Tok::kMinus) {
      consume();
      return negate(parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (tok_.kind == Tok::kCaret) {
      consume();
      return binary(BinaryOp::kPow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    switch (tok_.kind) {
      case Tok::kNumber: {
        NodePtr n = number(tok_.value);
        consume();
        return n;
      }
      case Tok::kLParen: {
        consume();
        NodePtr inner = parse_expr();
        if (tok_.kind != Tok::kRParen) fail({")", "+", "-", "*", "/", "^"});
        consume();
        return inner;
      }
      case Tok::kIdent:
        return parse_identifier();
      default:
        fail({"number", "t", "u", "function name", "(", "-"});
    }
  }

  NodePtr parse_identifier() {
    const Token ident = tok_;
    consume();
    if (ident.text == "t" || ident.text == "u") {
      return variable(ident.text == "t" ? Var::kT : Var::kU);
    }
    const auto func = lookup_func(ident.text);
    if (!func) {
      throw UnknownIdentifierError(
          "unknown identifier '" + ident.text + "' at line " +
              std::to_string(ident.line) + ", column " +
              std::to_string(ident.column) +
              " (allowed: t, u, sin, cos, exp, log, sqrt, abs, min, max)",
          ident.line, ident.column, ident.text);
    }
    if (tok_.kind != Tok::kLParen) fail({"("});
    consume();
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (tok_.kind == Tok::kComma) {
      consume();
      args.push_back(parse_expr());
    }
    if (tok_.kind != Tok::kRParen) fail({")", ","});
    consume();
    if (static_cast<int>(args.size()) != arity(*func)) {
      throw ArityError(std::string(name(*func)) + " takes " +
                           std::to_string(arity(*func)) + " argument(s), got " +
                           std::to_string(args.size()) + " at line " +
                           std::to_string(ident.line) + ", column " +
                           std::to_string(ident.column),
                       ident.line, ident.column);
    }
    return call(*func, std::move(args));
  }

  Lexer lexer_;
  Token tok_;
};

[[noreturn]] void fault(const std::string& what, double t, double u) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at (t = " << t << ", u = " << u << ")";
  throw EvaluationError(os.str(), t, u, true);
}

double checked(double value, const char* what, double t, double u) {
  if (!std::isfinite(value)) fault(std::string(what) + " is not finite", t, u);
  return value;
}

// Printing precedence: add/sub 1, mul/div 2, negation 3, power 4, atom 5.
int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::kNumber:
      return n.number < 0.0 || std::signbit(n.number) ? 3 : 5;
    case NodeKind::kVar:
    case NodeKind::kCall:
      return 5;
    case NodeKind::kNeg:
      return 3;
    case NodeKind::kBinary:
      switch (n.op) {
        case BinaryOp::kAdd:
        case BinaryOp::kSub:
          return 1;
        case BinaryOp::kMul:
        case BinaryOp::kDiv:
          return 2;
        case BinaryOp::kPow:
          return 4;
      }
  }
  return 5;
}

std::string wrap(const Node& n, bool parens) {
  return parens ? "(" + to_string(n) + ")" : to_string(n);
}

}  // namespace

NodePtr number(double value) {
  if (!std::isfinite(value)) throw ValidationError("numeric literal must be finite");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNumber;
  n->number = value;
  return n;
}

NodePtr variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kVar;
  n->var = v;
  return n;
}

NodePtr negate(NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNeg;
  n->children.push_back(std::move(child));
  return n;
}

NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kBinary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return n;
}

NodePtr call(Func f, std::vector<NodePtr> args) {
  if (static_cast<int>(args.size()) != arity(f)) {
    throw ArityError(std::string(name(f)) + " takes " +
                         std::to_string(arity(f)) + " argument(s)",
                     0, 0);
  }
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kCall;
  n->func = f;
  n->children = std::move(args);
  return n;
}

int arity(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.arity;
  }
  return 1;
}

std::string_view name(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

Expression::Expression(NodePtr root) : root_(std::move(root)) {
  if (!root_) throw ValidationError("expression has no root");
}

bool Expression::uses(Var v) const {
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->kind == NodeKind::kVar && n->var == v) return true;
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return false;
}

Expression parse(std::string_view source) {
  bool blank = true;
  for (char c : source) {
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  }
  if (blank) throw ParseError("empty expression", 1, 1, {"expression"});
  return Expression(Parser(source).parse_all());
}

double eval(const Expression& e, double t, double u) {
  return eval(e.root(), t, u);
}

double eval(const Node& node, double t, double u) {
  switch (node.kind) {
    case NodeKind::kNumber:
      return node.number;
    case NodeKind::kVar:
      return node.var == Var::kT ? t : u;
    case NodeKind::kNeg:
      return -eval(*node.children[0], t, u);
    case NodeKind::kBinary: {
      const double a = eval(*node.children[0], t, u);
      const double b = eval(*node.children[1], t, u);
      switch (node.op) {
        case BinaryOp::kAdd:
          return checked(a + b, "sum", t, u);
        case BinaryOp::kSub:
          return checked(a - b, "difference", t, u);
        case BinaryOp::kMul:
          return checked(a * b, "product", t, u);
        case BinaryOp::kDiv:
          if (b == 0.0) fault("division by zero", t, u);
          return checked(a / b, "quotient", t, u);
        case BinaryOp::kPow:
          if (a == 0.0 && b < 0.0) fault("zero raised to a negative power", t, u);
          if (a < 0.0 && b != std::trunc(b)) {
            fault("negative base raised to a non-integer power", t, u);
          }
          return checked(std::pow(a, b), "power", t, u);
      }
      break;
    }
    case NodeKind::kCall: {
      const double a = eval(*node.children[0], t, u);
      switch (node.func) {
        case Func::kSin:
          return std::sin(a);
        case Func::kCos:
          return std::cos(a);
        case Func::kExp:
          return checked(std::exp(a), "exp", t, u);
        case Func::kLog:
          if (!(a > 0.0)) fault("log of a non-positive value", t, u);
          return std::log(a);
        case Func::kSqrt:
          if (a < 0.0) fault("sqrt of a negative value", t, u);
          return std::sqrt(a);
        case Func::kAbs:
          return std::abs(a);
        case Func::kMin:
          return std::min(a, eval(*node.children[1], t, u));
        case Func::kMax:
          return std::max(a, eval(*node.children[1], t, u));
      }
      break;
    }
  }
  return 0.0;
}

std::string to_string(const Expression& e) { return to_string(e.root()); }

std::string to_string(const Node& node) {
  switch (node.kind) {
    case NodeKind::kNumber: {
      std::array<char, 64> buf{};
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                     node.number);
      (void)ec;
      return std::string(buf.data(), ptr);
    }
    case NodeKind::kVar:
      return node.var == Var::kT ? "t" : "u";
    case NodeKind::kNeg:
      return "-" + wrap(*node.children[0], precedence(*node.children[0]) < 3);
    case NodeKind::kBinary: {
      const Node& lhs = *node.children[0];
      const Node& rhs = *node.children[1];
      switch (node.op) {
        case BinaryOp::kAdd:
        case BinaryOp::kSub:
          return wrap(lhs, precedence(lhs) < 1) +
                 (node.op == BinaryOp::kAdd ? " + " : " - ") +
                 wrap(rhs, precedence(rhs) <= 1);
        case BinaryOp::kMul:
        case BinaryOp::kDiv:
          return wrap(lhs, precedence(lhs) < 2) +
                 (node.op == BinaryOp::kMul ? " * " : " / ") +
                 wrap(rhs, precedence(rhs) <= 2);
        case BinaryOp::kPow:
          return wrap(lhs, precedence(lhs) < 5) + "^" +
                 wrap(rhs, precedence(rhs) < 3);
      }
      break;
    }
    case NodeKind::kCall: {
      std::string out(name(node.func));
      out += "(";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(*node.children[i]);
      }
      return out + ")";
    }
  }
  return {};
}

}  // namespace tsbvp::expr
