#pragma once

// Second-order jets and the truncated-Taylor number type that produces them.
//
// Dual2 carries value, gradient and (packed, upper-triangular) Hessian with
// respect to n <= kMaxRank independent directions. Every arithmetic rule is
// the exact second-order chain rule, so derivatives are exact up to the
// floating-point evaluation of the elementary functions.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace invpsh {

/// Value, gradient and symmetric Hessian of a scalar function at a point.
struct Jet2 {
  double value = 0.0;
  std::vector<double> grad;
  linalg::Matrix hess;

  Jet2() = default;
  explicit Jet2(std::size_t n) : grad(n, 0.0), hess(n) {}
  Jet2(double v, std::vector<double> g, linalg::Matrix h)
      : value(v), grad(std::move(g)), hess(linalg::symmetrized(std::move(h))) {
    if (grad.size() != hess.size()) throw ConfigError("Jet2: gradient/Hessian size mismatch");
  }

  std::size_t size() const noexcept { return grad.size(); }

  bool finite() const {
    if (!std::isfinite(value)) return false;
    for (double g : grad)
      if (!std::isfinite(g)) return false;
    for (double h : hess.data())
      if (!std::isfinite(h)) return false;
    return true;
  }
};

/// Truncated Taylor arithmetic of order two in n directions.
class Dual2 {
 public:
  static constexpr std::size_t kPacked = kMaxRank * (kMaxRank + 1) / 2;

  Dual2() = default;
  /// Constant.
  Dual2(double v, std::size_t n) : v_(v), n_(n) { check_n(n); }
  /// Independent variable number `k` with value v.
  static Dual2 variable(double v, std::size_t k, std::size_t n) {
    Dual2 d(v, n);
    if (k >= n) throw ConfigError("Dual2: variable index out of range");
    d.g_[k] = 1.0;
    return d;
  }

  double value() const noexcept { return v_; }
  double grad(std::size_t i) const { return g_[i]; }
  double hess(std::size_t i, std::size_t j) const { return h_[idx(i, j)]; }
  std::size_t dims() const noexcept { return n_; }

  /// Set all derivative components directly (used when seeding composed coordinates).
  static Dual2 from_parts(double v, std::span<const double> g, const linalg::Matrix& h) {
    Dual2 d(v, g.size());
    for (std::size_t i = 0; i < g.size(); ++i) d.g_[i] = g[i];
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i; j < g.size(); ++j) d.h_[idx(i, j)] = h(i, j);
    return d;
  }

  Jet2 to_jet() const {
    Jet2 j(n_);
    j.value = v_;
    for (std::size_t a = 0; a < n_; ++a) {
      j.grad[a] = g_[a];
      for (std::size_t b = a; b < n_; ++b) j.hess(a, b) = j.hess(b, a) = h_[idx(a, b)];
    }
    return j;
  }

  /// f(x) given f(v), f'(v), f''(v).
  Dual2 apply(double f0, double f1, double f2) const {
    Dual2 r(f0, n_);
    for (std::size_t a = 0; a < n_; ++a) r.g_[a] = f1 * g_[a];
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a; b < n_; ++b) r.h_[idx(a, b)] = f1 * h_[idx(a, b)] + f2 * g_[a] * g_[b];
    return r;
  }

  Dual2 operator-() const { return apply(-v_, -1.0, 0.0); }

  Dual2& operator+=(const Dual2& o) {
    v_ += o.v_;
    for (std::size_t a = 0; a < n_; ++a) g_[a] += o.g_[a];
    for (std::size_t k = 0; k < packed(); ++k) h_[k] += o.h_[k];
    return *this;
  }
  Dual2& operator-=(const Dual2& o) {
    v_ -= o.v_;
    for (std::size_t a = 0; a < n_; ++a) g_[a] -= o.g_[a];
    for (std::size_t k = 0; k < packed(); ++k) h_[k] -= o.h_[k];
    return *this;
  }
  Dual2& operator*=(double s) {
    v_ *= s;
    for (std::size_t a = 0; a < n_; ++a) g_[a] *= s;
    for (std::size_t k = 0; k < packed(); ++k) h_[k] *= s;
    return *this;
  }

  friend Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
  friend Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
  friend Dual2 operator*(Dual2 a, double s) { return a *= s; }
  friend Dual2 operator*(double s, Dual2 a) { return a *= s; }

  friend Dual2 operator*(const Dual2& u, const Dual2& w) {
    Dual2 r(u.v_ * w.v_, u.n_);
    for (std::size_t a = 0; a < u.n_; ++a) r.g_[a] = u.v_ * w.g_[a] + w.v_ * u.g_[a];
    for (std::size_t a = 0; a < u.n_; ++a)
      for (std::size_t b = a; b < u.n_; ++b) {
        const std::size_t k = idx(a, b);
        r.h_[k] = u.v_ * w.h_[k] + w.v_ * u.h_[k] + u.g_[a] * w.g_[b] + u.g_[b] * w.g_[a];
      }
    return r;
  }

  friend Dual2 operator/(const Dual2& u, const Dual2& w) { return u * reciprocal(w); }

  friend Dual2 reciprocal(const Dual2& w) {
    const double inv = 1.0 / w.v_;
    return w.apply(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Dual2 exp(const Dual2& x) {
    const double e = std::exp(x.v_);
    return x.apply(e, e, e);
  }
  friend Dual2 log(const Dual2& x) {
    if (!(x.v_ > 0.0)) throw DomainError("log of a non-positive value");
    return x.apply(std::log(x.v_), 1.0 / x.v_, -1.0 / (x.v_ * x.v_));
  }
  friend Dual2 sinh(const Dual2& x) {
    const double s = std::sinh(x.v_), c = std::cosh(x.v_);
    return x.apply(s, c, s);
  }
  friend Dual2 cosh(const Dual2& x) {
    const double s = std::sinh(x.v_), c = std::cosh(x.v_);
    return x.apply(c, s, c);
  }
  friend Dual2 tanh(const Dual2& x) {
    const double t = std::tanh(x.v_);
    const double sech2 = 1.0 - t * t;
    return x.apply(t, sech2, -2.0 * t * sech2);
  }
  /// x^k for integer k; well defined at x = 0 for k >= 0.
  friend Dual2 pow_int(const Dual2& x, int k) {
    if (k == 0) return Dual2(1.0, x.n_);
    if (k == 1) return x;
    const double v = x.v_;
    const double f1 = k * std::pow(v, k - 1);
    const double f2 = k * (k - 1) * std::pow(v, k - 2);
    return x.apply(std::pow(v, k), f1, f2);
  }
  /// x^p for real p, x > 0.
  friend Dual2 pow_real(const Dual2& x, double p) {
    const double v = x.v_;
    if (!(v > 0.0)) throw DomainError("non-integer power of a non-positive value");
    return x.apply(std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0));
  }

 private:
  static void check_n(std::size_t n) {
    if (n > kMaxRank) throw ConfigError("Dual2: at most " + std::to_string(kMaxRank) + " directions");
  }
  static constexpr std::size_t idx(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
  }
  std::size_t packed() const noexcept { return n_ * (n_ + 1) / 2; }

  double v_ = 0.0;
  std::size_t n_ = 0;
  std::array<double, kMaxRank> g_{};
  std::array<double, kPacked> h_{};
};

inline constexpr double kDefaultFdStep = 1e-4;

/// Central finite-difference jet of a scalar function; step h_j = h * max(1, |x_j|).
/// Truncation error O(h^2). Throws DomainError when the stencil leaves the
/// function's domain (the callback throws or returns a non-finite value).
inline Jet2 fd_jet(const ScalarFunction& f, std::span<const double> x, double h = kDefaultFdStep) {
  if (!(h > 0.0)) throw ConfigError("fd_jet: step must be positive");
  const std::size_t n = x.size();
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> step(n);
  for (std::size_t j = 0; j < n; ++j) step[j] = h * std::max(1.0, std::abs(x[j]));

  auto eval = [&](std::span<const double> q) {
    double v = 0.0;
    try {
      v = f(q);
    } catch (const Error& e) {
      throw DomainError(std::string("fd_jet: stencil leaves the domain: ") + e.what());
    }
    if (!std::isfinite(v)) throw DomainError("fd_jet: stencil leaves the domain (non-finite value)");
    return v;
  };
  auto shifted = [&](std::size_t i, double si, std::size_t j, double sj) {
    p.assign(x.begin(), x.end());
    p[i] += si * step[i];
    p[j] += sj * step[j];
    return eval(p);
  };

  Jet2 out(n);
  out.value = eval(x);
  for (std::size_t i = 0; i < n; ++i) {
    p.assign(x.begin(), x.end());
    p[i] += step[i];
    const double fp = eval(p);
    p[i] = x[i] - step[i];
    const double fm = eval(p);
    out.grad[i] = (fp - fm) / (2.0 * step[i]);
    out.hess(i, i) = (fp - 2.0 * out.value + fm) / (step[i] * step[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (shifted(i, 1, j, 1) - shifted(i, 1, j, -1) - shifted(i, -1, j, 1) + shifted(i, -1, j, -1)) /
                       (4.0 * step[i] * step[j]);
      out.hess(i, j) = out.hess(j, i) = v;
    }
  }
  return out;
}

}  // namespace invpsh
