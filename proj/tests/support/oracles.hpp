#pragma once

// Reference computations kept independent of the library's code paths.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsbvp::testing {

// Σ_{j=i}^{N-1} μ_j Σ_{m=0}^{j-1} μ_m f_m with nested loops.
inline double naive_double_integral_tail(const std::vector<double>& t,
                                         const std::vector<double>& f,
                                         std::size_t i) {
  double outer = 0.0;
  for (std::size_t j = i; j + 1 < t.size(); ++j) {
    double inner = 0.0;
    for (std::size_t m = 0; m < j; ++m) inner += (t[m + 1] - t[m]) * f[m];
    outer += (t[j + 1] - t[j]) * inner;
  }
  return outer;
}

// Largest ε with u >= ε on (0, T - δ) and u >= (ε/δ)(T - t) on (T - δ, T),
// written as a minimum of ratios.
inline double closed_form_epsilon_star(const std::vector<double>& t,
                                       const std::vector<double>& u,
                                       double delta) {
  const double horizon = t.back();
  double best = INFINITY;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 0.0 && t[i] < horizon - delta) {
      best = std::min(best, u[i]);
    } else if (t[i] > horizon - delta && t[i] < horizon) {
      best = std::min(best, u[i] * delta / (horizon - t[i]));
    }
  }
  return std::max(best, 0.0);
}

// Evaluates expression text directly while parsing it, without building a
// tree. Same grammar and the same floating-point operations as the library.
class ReferenceEvaluator {
 public:
  ReferenceEvaluator(std::string_view src, double t, double u)
      : src_(src), t_(t), u_(u) {}

  double run() {
    const double v = expr();
    skip();
    if (pos_ != src_.size()) throw std::runtime_error("trailing input");
    return v;
  }

 private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double expr() {
    double v = term();
    for (;;) {
      if (accept('+')) v = v + term();
      else if (accept('-')) v = v - term();
      else return v;
    }
  }
  double term() {
    double v = unary();
    for (;;) {
      if (accept('*')) v = v * unary();
      else if (accept('/')) v = v / unary();
      else return v;
    }
  }
  double unary() {
    if (accept('-')) return -unary();
    return power();
  }
  double power() {
    const double base = primary();
    if (accept('^')) {
      const double e = unary();
      return std::pow(base, e);
    }
    return base;
  }
  double primary() {
    skip();
    if (accept('(')) {
      const double v = expr();
      if (!accept(')')) throw std::runtime_error("expected )");
      return v;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(std::string(src_.substr(pos_)), &used);
      pos_ += used;
      return v;
    }
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (name == "t") return t_;
    if (name == "u") return u_;
    if (!accept('(')) throw std::runtime_error("expected (");
    const double a = expr();
    double b = 0.0;
    if (name == "min" || name == "max") {
      if (!accept(',')) throw std::runtime_error("expected ,");
      b = expr();
    }
    if (!accept(')')) throw std::runtime_error("expected )");
    if (name == "sin") return std::sin(a);
    if (name == "cos") return std::cos(a);
    if (name == "exp") return std::exp(a);
    if (name == "log") return std::log(a);
    if (name == "sqrt") return std::sqrt(a);
    if (name == "abs") return std::abs(a);
    if (name == "min") return std::min(a, b);
    if (name == "max") return std::max(a, b);
    throw std::runtime_error("unknown function " + name);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  double t_;
  double u_;
};

}  // namespace tsbvp::testing
