#pragma once

// The Killing potential rho(exp(H)K) = (b/4) Σ_j rhohat(2 a_j) with
// rhohat(t) = log((cosh t + 1)/2), normalized by rhohat(0) = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "funcspace.hpp"
#include "jet.hpp"
#include "model.hpp"

namespace invpsh {

struct RhoHat {
  double value, d1, d2;
};

/// log cosh x without overflow.
inline double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

/// rhohat(t) = 2 log cosh(t/2), rhohat' = tanh(t/2), rhohat'' = sech^2(t/2) / 2.
inline RhoHat rho_hat(double t) {
  const double th = std::tanh(0.5 * t);
  return {2.0 * log_cosh(0.5 * t), th, 0.5 * (1.0 - th * th)};
}

inline Dual2 log_cosh(const Dual2& x) {
  const double th = std::tanh(x.value());
  return x.apply(log_cosh(x.value()), th, 1.0 - th * th);
}

/// Slice-chart Killing potential: (b/2) Σ log cosh a_j.
inline InvariantFunction killing_potential_slice(const SymmetricSpaceModel& m) {
  m.validate();
  const double b = m.killing_b;
  auto f = [b](auto a) {
    using T = std::remove_cvref_t<decltype(a[0])>;
    T sum = a[0] * 0.0;
    for (const T& x : a) sum += log_cosh(x);
    return sum * (0.5 * b);
  };
  return make_function(m.rank, Chart::Slice, f, "killing_potential");
}

/// Modulus-chart Killing potential: -(b/4) Σ log(1 - rho_j^2).
inline InvariantFunction killing_potential_modulus(const SymmetricSpaceModel& m) {
  m.validate();
  const double b = m.killing_b;
  auto f = [b](auto rho) {
    using T = std::remove_cvref_t<decltype(rho[0])>;
    T sum = rho[0] * 0.0;
    for (const T& x : rho) {
      if constexpr (std::is_same_v<T, double>) {
        if (!(std::abs(x) < 1.0)) throw DomainError("modulus must lie in (-1, 1)");
        sum += std::log1p(-x * x);
      } else {
        const double v = x.value();
        if (!(std::abs(v) < 1.0)) throw DomainError("modulus must lie in (-1, 1)");
        const double q = 1.0 - v * v;
        sum += x.apply(std::log1p(-v * v), -2.0 * v / q, -2.0 * (1.0 + v * v) / (q * q));
      }
    }
    return sum * (-0.25 * b);
  };
  return make_function(m.rank, Chart::Modulus, f, "killing_potential");
}

inline InvariantFunction killing_potential(const SymmetricSpaceModel& m, Chart chart = Chart::Slice) {
  switch (chart) {
    case Chart::Slice: return killing_potential_slice(m);
    case Chart::Modulus: return killing_potential_modulus(m);
    case Chart::Log: break;
  }
  throw ConfigError("killing_potential is available in the slice and modulus charts");
}

/// (b/4) Σ rhohat(2 a_j).
inline double potential_value(const SymmetricSpaceModel& m, std::span<const double> h) {
  if (h.size() != m.rank) throw ConfigError("point dimension does not match model rank");
  double sum = 0.0;
  for (double a : h) sum += rho_hat(2.0 * a).value;
  return 0.25 * m.killing_b * sum;
}

/// -(1/2) sinh(2 a_j) rhohat'(2 a_j) b = -b sinh^2 a_j.
inline double moment_coefficient(const SymmetricSpaceModel& m, std::span<const double> h, std::size_t j) {
  if (h.size() != m.rank) throw ConfigError("point dimension does not match model rank");
  if (j >= m.rank) throw ConfigError("moment_coefficient: index out of range");
  const double s = std::sinh(h[j]);
  return -m.killing_b * s * s;
}

struct BergmanFit {
  double constant = 0.0;
  double deviation = 0.0;
  bool flagged = false;
};

inline constexpr double kBergmanFlagTolerance = 1e-10;

/// Minimax constant c for potential_value(atanh rho) - (-2 log(1 - rho^2)) ≈ c.
inline BergmanFit bergman_identify(const SymmetricSpaceModel& m, std::span<const double> moduli) {
  if (m.rank != 1) throw ConfigError("bergman_identify needs a rank-one model");
  if (moduli.empty()) throw ConfigError("bergman_identify: no samples");
  double lo = INFINITY, hi = -INFINITY;
  for (double rho : moduli) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("bergman_identify: moduli must lie in (0, 1)");
    const double a = std::atanh(rho);
    const double d = potential_value(m, std::span<const double>(&a, 1)) + 2.0 * std::log1p(-rho * rho);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  BergmanFit fit{0.5 * (hi + lo), 0.5 * (hi - lo), false};
  fit.flagged = fit.deviation > kBergmanFlagTolerance;
  return fit;
}

}  // namespace invpsh
