#pragma once

// A small expression language for invariant functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | variable | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | cosh | sinh | tanh
//
// Variables are t1..tr (squared moduli) or s1..sr (log-moduli), depending on
// the prefix the parser is constructed with. '^' is right-associative and
// binds tighter than unary minus on its left: -t1^2 == -(t1^2).

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace invpsh::expr {

enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Cosh, Sinh, Tanh };

struct Node {
  Op op;
  double number = 0.0;
  std::size_t var = 0;  // 0-based
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr make_number(double v) { return std::make_shared<const Node>(Node{Op::Number, v, 0, nullptr, nullptr}); }
inline NodePtr make_var(std::size_t k) { return std::make_shared<const Node>(Node{Op::Var, 0.0, k, nullptr, nullptr}); }
inline NodePtr make_unary(Op op, NodePtr a) { return std::make_shared<const Node>(Node{op, 0.0, 0, std::move(a), nullptr}); }
inline NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  return std::make_shared<const Node>(Node{op, 0.0, 0, std::move(a), std::move(b)});
}

/// Constant subtree value, or NaN if the subtree mentions a variable.
inline double constant_value(const Node& n) {
  switch (n.op) {
    case Op::Number: return n.number;
    case Op::Var: return std::nan("");
    case Op::Neg: return -constant_value(*n.lhs);
    default: break;
  }
  if (n.rhs) {
    const double a = constant_value(*n.lhs), b = constant_value(*n.rhs);
    switch (n.op) {
      case Op::Add: return a + b;
      case Op::Sub: return a - b;
      case Op::Mul: return a * b;
      case Op::Div: return a / b;
      case Op::Pow: return std::pow(a, b);
      default: return std::nan("");
    }
  }
  const double a = constant_value(*n.lhs);
  switch (n.op) {
    case Op::Exp: return std::exp(a);
    case Op::Log: return std::log(a);
    case Op::Cosh: return std::cosh(a);
    case Op::Sinh: return std::sinh(a);
    case Op::Tanh: return std::tanh(a);
    default: return std::nan("");
  }
}

class Parser {
 public:
  Parser(std::string_view text, char var_prefix) : s_(text), prefix_(var_prefix) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

  /// Highest 1-based variable index seen (0 if none).
  std::size_t max_var() const noexcept { return max_var_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr a = term();
    for (;;) {
      if (accept('+'))
        a = make_binary(Op::Add, a, term());
      else if (accept('-'))
        a = make_binary(Op::Sub, a, term());
      else
        return a;
    }
  }

  NodePtr term() {
    NodePtr a = unary();
    for (;;) {
      if (accept('*'))
        a = make_binary(Op::Mul, a, unary());
      else if (accept('/'))
        a = make_binary(Op::Div, a, unary());
      else
        return a;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc{} || end != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view id = s_.substr(start, pos_ - start);

    static constexpr std::pair<std::string_view, Op> kFuncs[] = {
        {"exp", Op::Exp}, {"log", Op::Log}, {"cosh", Op::Cosh}, {"sinh", Op::Sinh}, {"tanh", Op::Tanh}};
    for (const auto& [name, op] : kFuncs) {
      if (id == name) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return make_unary(op, arg);
      }
    }

    if (id.size() >= 2 && id[0] == prefix_) {
      std::size_t k = 0;
      const auto [end, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), k);
      if (ec == std::errc{} && end == id.data() + id.size() && k >= 1 && id[1] != '0') {
        max_var_ = std::max(max_var_, k);
        return make_var(k - 1);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(id) + "'");
  }

  std::string_view s_;
  char prefix_;
  std::size_t pos_ = 0;
  std::size_t max_var_ = 0;
};

// Elementary operations on double, with the same domain rules as Dual2.
namespace detail {
inline double constant(double v, double) { return v; }
inline Dual2 constant(double v, const Dual2& like) { return Dual2(v, like.dims()); }
inline double value_of(double x) { return x; }
inline double value_of(const Dual2& x) { return x.value(); }

inline double f_exp(double x) { return std::exp(x); }
inline double f_log(double x) {
  if (!(x > 0.0)) throw DomainError("log of a non-positive value");
  return std::log(x);
}
inline double f_cosh(double x) { return std::cosh(x); }
inline double f_sinh(double x) { return std::sinh(x); }
inline double f_tanh(double x) { return std::tanh(x); }
inline double f_pow_int(double x, int k) { return std::pow(x, k); }
inline double f_pow_real(double x, double p) {
  if (!(x > 0.0)) throw DomainError("non-integer power of a non-positive value");
  return std::pow(x, p);
}
inline Dual2 f_exp(const Dual2& x) { return exp(x); }
inline Dual2 f_log(const Dual2& x) { return log(x); }
inline Dual2 f_cosh(const Dual2& x) { return cosh(x); }
inline Dual2 f_sinh(const Dual2& x) { return sinh(x); }
inline Dual2 f_tanh(const Dual2& x) { return tanh(x); }
inline Dual2 f_pow_int(const Dual2& x, int k) { return pow_int(x, k); }
inline Dual2 f_pow_real(const Dual2& x, double p) { return pow_real(x, p); }
}  // namespace detail

/// Evaluate on doubles or Dual2; `vars[k]` is the value of variable k+1.
template <typename T>
T evaluate(const Node& n, std::span<const T> vars) {
  using namespace detail;
  switch (n.op) {
    case Op::Number: return constant(n.number, vars.front());
    case Op::Var: return vars[n.var];
    case Op::Neg: return -evaluate(*n.lhs, vars);
    case Op::Add: return evaluate(*n.lhs, vars) + evaluate(*n.rhs, vars);
    case Op::Sub: return evaluate(*n.lhs, vars) - evaluate(*n.rhs, vars);
    case Op::Mul: return evaluate(*n.lhs, vars) * evaluate(*n.rhs, vars);
    case Op::Div: {
      const T d = evaluate(*n.rhs, vars);
      if (value_of(d) == 0.0) throw DomainError("division by zero");
      return evaluate(*n.lhs, vars) / d;
    }
    case Op::Pow: {
      const T base = evaluate(*n.lhs, vars);
      const double p = constant_value(*n.rhs);
      if (std::isfinite(p)) {
        if (p == std::round(p) && std::abs(p) <= 64.0) {
          if (p < 0.0 && value_of(base) == 0.0) throw DomainError("negative power of zero");
          return f_pow_int(base, static_cast<int>(p));
        }
        return f_pow_real(base, p);
      }
      return f_exp(evaluate(*n.rhs, vars) * f_log(base));
    }
    case Op::Exp: return f_exp(evaluate(*n.lhs, vars));
    case Op::Log: return f_log(evaluate(*n.lhs, vars));
    case Op::Cosh: return f_cosh(evaluate(*n.lhs, vars));
    case Op::Sinh: return f_sinh(evaluate(*n.lhs, vars));
    case Op::Tanh: return f_tanh(evaluate(*n.lhs, vars));
  }
  throw EvaluationError("expression: corrupt node");
}

}  // namespace invpsh::expr
