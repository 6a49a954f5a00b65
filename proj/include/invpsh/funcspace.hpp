#pragma once

// W-invariant functions in three coordinate charts:
//   Slice    a_j           (f̃)
//   Modulus  rho_j = tanh a_j
//   Log      s_j = log tanh a_j   (f̂; needs a_j != 0)
// Each function is evaluated in its native chart by forward-mode jets and
// transported to the other charts by the coordinatewise chain rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "jet.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "shadow.hpp"

namespace invpsh {

enum class Chart { Slice, Modulus, Log };

inline const char* to_string(Chart c) {
  switch (c) {
    case Chart::Slice: return "slice";
    case Chart::Modulus: return "modulus";
    case Chart::Log: return "log";
  }
  return "?";
}

inline Chart chart_from_string(const std::string& s) {
  if (s == "slice") return Chart::Slice;
  if (s == "modulus") return Chart::Modulus;
  if (s == "log") return Chart::Log;
  throw ConfigError("unknown chart '" + s + "' (expected slice, modulus or log)");
}

using JetFunction = std::function<Jet2(std::span<const double>)>;

struct InvariantFunction {
  std::size_t rank = 1;
  Chart chart = Chart::Slice;
  JetFunction jet;       // native chart
  ScalarFunction value;  // native chart
  std::optional<ReinhardtShadow> domain_hint;
  bool symmetrized = false;
  std::string description;
};

/// Build a function from a callable templated on the number type, i.e.
/// `f(std::span<const T>) -> T` for T in {double, Dual2}. With
/// `symmetrize`, the result is the mean over the signed-permutation orbit
/// (slice chart) or over coordinate permutations (other charts).
template <typename F>
InvariantFunction make_function(std::size_t rank, Chart chart, F f, std::string description = {},
                                bool symmetrize = false) {
  if (rank < 1 || rank > kMaxRank) throw ConfigError("function rank out of range");
  InvariantFunction out;
  out.rank = rank;
  out.chart = chart;
  out.description = std::move(description);
  out.symmetrized = symmetrize;

  auto check = [rank](std::span<const double> x) {
    if (x.size() != rank) throw ConfigError("point dimension does not match function rank");
  };
  if (!symmetrize) {
    out.value = [f, check](std::span<const double> x) {
      check(x);
      return f(x);
    };
    out.jet = [f, check, rank](std::span<const double> x) {
      check(x);
      std::vector<Dual2> v;
      for (std::size_t k = 0; k < rank; ++k) v.push_back(Dual2::variable(x[k], k, rank));
      return f(std::span<const Dual2>(v)).to_jet();
    };
    return out;
  }

  const bool signs = chart == Chart::Slice;
  auto visit = [rank, signs](auto&& fn) {
    if (signs) {
      for_each_weyl_element(rank, fn);
    } else {
      SignedPermutation w = SignedPermutation::identity(rank);
      do fn(static_cast<const SignedPermutation&>(w));
      while (std::next_permutation(w.perm.begin(), w.perm.end()));
    }
  };
  out.value = [f, check, visit](std::span<const double> x) {
    check(x);
    std::vector<double> vals;
    visit([&](const SignedPermutation& w) { vals.push_back(f(std::span<const double>(w.apply(x)))); });
    std::sort(vals.begin(), vals.end());
    return std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
  };
  out.jet = [f, check, visit, rank](std::span<const double> x) {
    check(x);
    std::vector<Dual2> seed, y(rank);
    for (std::size_t k = 0; k < rank; ++k) seed.push_back(Dual2::variable(x[k], k, rank));
    Dual2 sum(0.0, rank);
    std::size_t count = 0;
    visit([&](const SignedPermutation& w) {
      for (std::size_t i = 0; i < rank; ++i) y[i] = w.signs[i] < 0 ? -seed[w.perm[i]] : seed[w.perm[i]];
      sum += f(std::span<const Dual2>(y));
      ++count;
    });
    sum *= 1.0 / static_cast<double>(count);
    return sum.to_jet();
  };
  return out;
}

namespace detail {

// Coordinate change x = phi(y) of one variable, with phi' and phi''.
struct Reparam {
  double x, d1, d2;
};

inline Reparam reparam(Chart from, Chart to, double y) {
  // `from` is the chart of y, `to` the chart of x.
  if (from == to) return {y, 1.0, 0.0};
  switch (from) {
    case Chart::Slice: {
      if (to == Chart::Modulus) {
        const double t = std::tanh(y), c = std::cosh(y);
        return {t, 1.0 / (c * c), -2.0 * std::sinh(y) / (c * c * c)};
      }
      if (y == 0.0) throw DomainError("log chart is undefined at a_j = 0");
      const double s2 = std::sinh(2.0 * y);
      return {std::log(std::abs(std::tanh(y))), 2.0 / s2, -4.0 * std::cosh(2.0 * y) / (s2 * s2)};
    }
    case Chart::Modulus: {
      if (!(std::abs(y) < 1.0)) throw DomainError("modulus must lie in (-1, 1)");
      if (to == Chart::Slice) {
        const double q = 1.0 - y * y;
        return {std::atanh(y), 1.0 / q, 2.0 * y / (q * q)};
      }
      if (y == 0.0) throw DomainError("log chart is undefined at modulus 0");
      return {std::log(std::abs(y)), 1.0 / y, -1.0 / (y * y)};
    }
    case Chart::Log: {
      if (!(y < 0.0)) throw DomainError("log-modulus must be negative");
      const double e = std::exp(y);
      if (to == Chart::Modulus) return {e, e, e};
      const double q = 1.0 - e * e;
      return {std::atanh(e), e / q, e * (1.0 + e * e) / (q * q)};
    }
  }
  throw DomainError("bad chart");
}

inline double modulus_of(Chart chart, double x) {
  switch (chart) {
    case Chart::Slice: return std::abs(std::tanh(x));
    case Chart::Modulus: return std::abs(x);
    case Chart::Log: return std::exp(x);
  }
  return 0.0;
}

inline std::vector<double> native_point(const InvariantFunction& f, Chart chart, std::span<const double> y,
                                        std::vector<Reparam>* maps = nullptr) {
  if (y.size() != f.rank) throw ConfigError("point dimension does not match function rank");
  std::vector<double> x(y.size());
  std::vector<double> moduli(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const Reparam p = reparam(chart, f.chart, y[j]);
    x[j] = p.x;
    moduli[j] = modulus_of(f.chart, p.x);
    if (maps) maps->push_back(p);
  }
  if (f.domain_hint && !f.domain_hint->contains(moduli)) throw DomainError("point lies outside the function's domain");
  return x;
}

}  // namespace detail

/// Value of f at a point given in `chart`.
inline double value_in(const InvariantFunction& f, Chart chart, std::span<const double> y) {
  const double v = f.value(detail::native_point(f, chart, y));
  if (!std::isfinite(v)) throw EvaluationError("function value is not finite");
  return v;
}

/// Scalar callback of f in `chart` (for finite-difference oracles).
inline ScalarFunction scalar_in(const InvariantFunction& f, Chart chart) {
  return [f, chart](std::span<const double> y) { return value_in(f, chart, y); };
}

/// Jet of f at a point given in `chart` (chain rule from the native chart).
inline Jet2 jet_in(const InvariantFunction& f, Chart chart, std::span<const double> y) {
  std::vector<detail::Reparam> maps;
  const std::vector<double> x = detail::native_point(f, chart, y, &maps);
  const Jet2 g = f.jet(x);
  if (!g.finite()) throw EvaluationError("jet is not finite");
  const std::size_t n = y.size();
  Jet2 out(n);
  out.value = g.value;
  for (std::size_t j = 0; j < n; ++j) out.grad[j] = g.grad[j] * maps[j].d1;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) out.hess(j, l) = g.hess(j, l) * maps[j].d1 * maps[l].d1;
    out.hess(j, j) += g.grad[j] * maps[j].d2;
  }
  if (!out.finite()) throw EvaluationError("transported jet is not finite");
  return out;
}

inline Jet2 to_slice(const InvariantFunction& f, std::span<const double> h) { return jet_in(f, Chart::Slice, h); }
inline Jet2 to_modulus(const InvariantFunction& f, std::span<const double> rho) {
  return jet_in(f, Chart::Modulus, rho);
}
inline Jet2 to_log(const InvariantFunction& f, std::span<const double> s) { return jet_in(f, Chart::Log, s); }

/// Numerical W-invariance check: max |f̃(w·H) − f̃(H)| over the orbit.
inline double orbit_deviation(const InvariantFunction& f, std::span<const double> h) {
  const double base = value_in(f, Chart::Slice, h);
  double worst = 0.0;
  for_each_weyl_element(f.rank, [&](const SignedPermutation& w) {
    const auto wh = w.apply(h);
    worst = std::max(worst, std::abs(value_in(f, Chart::Slice, wh) - base));
  });
  return worst;
}

namespace detail {

// Deterministic probe points for the permutation-symmetry test.
inline std::vector<std::vector<double>> symmetry_probes(std::size_t r, Chart chart) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < 48; ++k) {
    std::vector<double> p(r);
    for (std::size_t j = 0; j < r; ++j) {
      const double u = std::fmod(0.137 + 0.6180339887498949 * static_cast<double>(k * r + j + 1) +
                                     0.3247179572447460 * static_cast<double>(j * j),
                                 1.0);
      p[j] = chart == Chart::Log ? -4.0 * (0.02 + 0.96 * u) : 0.05 + 0.9 * u;
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline bool permutation_symmetric(const expr::Node& root, std::size_t r, Chart chart) {
  if (r == 1) return true;
  std::size_t valid = 0;
  for (const auto& p : symmetry_probes(r, chart)) {
    double base = 0.0;
    try {
      base = expr::evaluate<double>(root, p);
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(base)) continue;
    for (std::size_t j = 0; j + 1 < r; ++j) {
      std::vector<double> q(p);
      std::swap(q[j], q[j + 1]);
      double v = 0.0;
      try {
        v = expr::evaluate<double>(root, q);
      } catch (const DomainError&) {
        return false;
      }
      if (!(std::abs(v - base) <= 1e-12 * std::max(1.0, std::abs(base)))) return false;
    }
    if (++valid == 4) break;
  }
  return true;
}

}  // namespace detail

/// Parse an invariant function.
///
/// Modulus chart: variables t1..tr are squared moduli rho_j^2; the native
/// coordinates are rho_j. Log chart: variables s1..sr are the native log
/// moduli. Expressions that are not symmetric under coordinate permutations
/// are replaced by their permutation average and flagged.
inline InvariantFunction parse_invariant(const std::string& text, std::size_t r, Chart chart = Chart::Modulus) {
  if (r < 1 || r > kMaxRank) throw ConfigError("rank must be in [1, " + std::to_string(kMaxRank) + "]");
  if (chart == Chart::Slice) throw ConfigError("expressions are defined in the modulus or log chart");
  const char prefix = chart == Chart::Modulus ? 't' : 's';
  expr::Parser parser(text, prefix);
  const expr::NodePtr root = parser.parse();
  if (parser.max_var() > r)
    throw ConfigError("expression uses " + std::string(1, prefix) + std::to_string(parser.max_var()) +
                      " but rank is " + std::to_string(r));
  const bool symmetric = detail::permutation_symmetric(*root, r, chart);

  // Variables handed to the tree: t_j = rho_j^2 or s_j itself.
  const bool squared = chart == Chart::Modulus;
  auto f = [root, squared](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    std::vector<T> vars;
    vars.reserve(x.size());
    for (const T& v : x) vars.push_back(squared ? v * v : v);
    return expr::evaluate<T>(*root, std::span<const T>(vars));
  };
  InvariantFunction out = make_function(r, chart, f, text, !symmetric);
  return out;
}

}  // namespace invpsh
