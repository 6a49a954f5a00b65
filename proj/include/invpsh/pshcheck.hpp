#pragma once

// Grid verdicts on plurisubharmonicity of invariant functions, the rank-two
// diagnostics for T⋉S₂-invariant functions, and minimum location.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "funcspace.hpp"
#include "levi.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "reinhardt.hpp"

namespace invpsh {

inline constexpr double kDefaultTolerance = 1e-9;

enum class Verdict { StrictlyPsh, PshNotStrict, NotPsh, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StrictlyPsh: return "StrictlyPsh";
    case Verdict::PshNotStrict: return "PshNotStrict";
    case Verdict::NotPsh: return "NotPsh";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Modulus samples per axis: each breakpoint interval of the shadow gets a
/// share of grid_n cell centres proportional to its width, plus the modulus 0.
/// Lower faces with positive modulus are boundary of the open domain and are
/// not sampled.
inline std::vector<double> modulus_axis_samples(const ReinhardtShadow& s, std::size_t grid_n) {
  if (grid_n < 2) throw ConfigError("grid_n must be at least 2");
  const auto& bp = s.breakpoints();
  const double span = bp.back() - bp.front();
  std::vector<double> out;
  if (bp.front() == 0.0) out.push_back(0.0);
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double w = bp[k + 1] - bp[k];
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(grid_n * w / span)));
    for (std::size_t i = 0; i < m; ++i)
      out.push_back(bp[k] + w * (static_cast<double>(i) + 0.5) / static_cast<double>(m));
  }
  return out;
}

/// Chamber points rho_1 >= ... >= rho_r >= 0 of the sample grid lying in the shadow.
inline std::vector<std::vector<double>> chamber_grid(const ReinhardtShadow& s, std::size_t grid_n) {
  const auto axis = modulus_axis_samples(s, grid_n);
  const std::size_t r = s.rank();
  const std::size_t n = axis.size();
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(r, 0);
  for (;;) {
    std::vector<double> p(r);
    for (std::size_t j = 0; j < r; ++j) p[j] = axis[idx[j]];
    if (s.contains(p)) out.push_back(std::move(p));
    // Next non-increasing multi-index over axis positions (p[0] >= p[1] >= ...).
    std::size_t j = r;
    while (j-- > 0) {
      const std::size_t cap = j == 0 ? n - 1 : idx[j - 1];
      if (idx[j] < cap) {
        ++idx[j];
        for (std::size_t k = j + 1; k < r; ++k) idx[k] = 0;
        break;
      }
      if (j == 0) return out;
    }
  }
}

struct CheckReport {
  Verdict verdict = Verdict::Inconclusive;
  double min_a_block_eig = INFINITY;
  double min_medium = INFINITY;
  double min_short = NAN;
  std::vector<double> witness_point;  // slice coordinates
  std::vector<double> witness_a, witness_medium, witness_short;
  std::string grid_spec;
  std::size_t points = 0;
  double tolerance = kDefaultTolerance;
  bool stein_shadow = false;
  std::string certificate;  // "a_block" or "all_blocks"
  std::string note;
};

inline std::vector<double> slice_of_moduli(std::span<const double> rho) {
  std::vector<double> a(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) a[j] = std::atanh(rho[j]);
  return a;
}

inline CheckReport check_invariant_psh(const SymmetricSpaceModel& model, const InvariantFunction& f,
                                       const ReinhardtShadow& shadow, std::size_t grid_n = kDefaultGridN,
                                       double tolerance = kDefaultTolerance, const LeviOptions& opt = {}) {
  if (shadow.rank() != model.rank || f.rank != model.rank) throw ConfigError("rank mismatch");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  CheckReport rep;
  rep.tolerance = tolerance;
  const auto pts = chamber_grid(shadow, grid_n);
  if (pts.empty()) throw EvaluationError("psh check: the sample grid misses the shadow");
  rep.points = pts.size();
  rep.grid_spec = "chamber grid, " + std::to_string(grid_n) + " modulus samples per axis, " +
                  std::to_string(pts.size()) + " points in the shadow";
  const Classification cls = classify_domain(model, shadow, grid_n);
  rep.stein_shadow = cls.stein;
  rep.certificate = cls.stein ? "a_block" : "all_blocks";

  for (const auto& rho : pts) {
    const auto a = slice_of_moduli(rho);
    LeviBlockForm form;
    try {
      form = assemble(model, f, a, opt);
    } catch (const Error& e) {
      std::string where;
      for (double x : a) where += (where.empty() ? "" : ", ") + std::to_string(x);
      throw EvaluationError(std::string("psh check: evaluation failed at a = (") + where + "): " + e.what());
    }
    const BlockMinima m = block_minima(form);
    if (m.a_eig < rep.min_a_block_eig) rep.min_a_block_eig = m.a_eig, rep.witness_a = a;
    if (m.medium < rep.min_medium) rep.min_medium = m.medium, rep.witness_medium = a;
    if (!model.is_tube() && (std::isnan(rep.min_short) || m.short_ < rep.min_short))
      rep.min_short = m.short_, rep.witness_short = a;
  }

  const double others = std::min(rep.min_medium, model.is_tube() ? INFINITY : rep.min_short);
  const double tol = tolerance;
  if (cls.stein) {
    if (rep.min_a_block_eig > tol) {
      rep.verdict = others > tol ? Verdict::StrictlyPsh : Verdict::Inconclusive;
      if (rep.verdict == Verdict::Inconclusive)
        rep.note = "flat block is positive definite but a root-block coefficient is not positive";
    } else if (rep.min_a_block_eig < -tol) {
      rep.verdict = Verdict::NotPsh;
    } else {
      rep.verdict = others < -tol ? Verdict::Inconclusive : Verdict::PshNotStrict;
      if (rep.verdict == Verdict::Inconclusive)
        rep.note = "flat block is positive semidefinite but a root-block coefficient is negative";
    }
  } else {
    const double lowest = std::min(rep.min_a_block_eig, others);
    if (lowest < -tol)
      rep.verdict = Verdict::NotPsh;
    else if (lowest > tol)
      rep.verdict = Verdict::StrictlyPsh;
    else
      rep.verdict = Verdict::PshNotStrict;
    if (rep.verdict == Verdict::StrictlyPsh && !model.is_tube() && !cls.complete) {
      rep.verdict = Verdict::Inconclusive;
      rep.note = "non-tube strictness on a non-complete shadow is not certified";
    }
  }

  // Witness: where the most negative (or smallest) relevant quantity occurs.
  rep.witness_point = rep.witness_a;
  double lowest = rep.min_a_block_eig;
  if (!cls.stein || rep.verdict != Verdict::StrictlyPsh) {
    if (rep.min_medium < lowest) lowest = rep.min_medium, rep.witness_point = rep.witness_medium;
    if (!model.is_tube() && rep.min_short < lowest) rep.witness_point = rep.witness_short;
  }
  if (rep.note.empty()) rep.note = "verdict certifies the sample grid only";
  return rep;
}

// Rank-two diagnostics.

/// (r sinh(2a_1) g_1 − s sinh(2a_2) g_2) / (sinh² a_1 − sinh² a_2).
inline double convess_G(const InvariantFunction& f, double r, double s, double a1, double a2) {
  if (f.rank != 2) throw ConfigError("convess_G needs a rank-two function");
  const double s1 = std::sinh(a1), s2 = std::sinh(a2);
  const double den = s1 * s1 - s2 * s2;
  if (std::abs(den) <= 1e-14 * std::max(1.0, s1 * s1 + s2 * s2))
    throw DomainError("convess_G: degenerate denominator (sinh^2 a_1 = sinh^2 a_2)");
  const double a[2] = {a1, a2};
  const Jet2 jet = to_slice(f, a);
  return (r * std::sinh(2.0 * a1) * jet.grad[0] - s * std::sinh(2.0 * a2) * jet.grad[1]) / den;
}

struct ConvessScan {
  double min_value = INFINITY;
  std::size_t nonpositive = 0;
  std::size_t points = 0;
  std::vector<double> witness;
};

/// G over the grid {(i, k) * a_max / n : 1 <= i, k <= n, i != k}.
inline ConvessScan convess_scan(const InvariantFunction& f, double r, double s, double a_max = 2.0,
                                std::size_t n = 24) {
  ConvessScan out;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = 1; k <= n; ++k) {
      if (i == k) continue;
      const double a1 = a_max * static_cast<double>(i) / static_cast<double>(n);
      const double a2 = a_max * static_cast<double>(k) / static_cast<double>(n);
      const double g = convess_G(f, r, s, a1, a2);
      ++out.points;
      if (g <= 0.0) ++out.nonpositive;
      if (g < out.min_value) out.min_value = g, out.witness = {a1, a2};
    }
  }
  return out;
}

struct ConvessProperties {
  bool positive_gradient = true;     // ∂f̃/∂a_1 > 0 for a_1 > 0
  bool swap_identity = true;         // ∂f̃/∂a_2(a_1,a_2) = ∂f̃/∂a_1(a_2,a_1)
  bool vanishing_on_wall = true;     // ∂f̃/∂a_1(0,a_2) = 0
  double min_gradient = INFINITY;
  double max_swap_error = 0.0;
  double max_wall_gradient = 0.0;
  std::size_t points = 0;
  bool all() const { return positive_gradient && swap_identity && vanishing_on_wall; }
};

inline ConvessProperties convess_properties(const InvariantFunction& f, double a_max = 2.0, std::size_t n = 16,
                                            double tol = 1e-10) {
  if (f.rank != 2) throw ConfigError("convess_properties needs a rank-two function");
  ConvessProperties p;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double a1 = a_max * static_cast<double>(i) / static_cast<double>(n);
      const double a2 = a_max * static_cast<double>(k) / static_cast<double>(n);
      const double x[2] = {a1, a2}, y[2] = {a2, a1};
      const Jet2 jx = to_slice(f, x), jy = to_slice(f, y);
      ++p.points;
      const double scale = std::max(1.0, std::abs(jx.grad[1]));
      p.max_swap_error = std::max(p.max_swap_error, std::abs(jx.grad[1] - jy.grad[0]) / scale);
      if (i == 0) {
        p.max_wall_gradient = std::max(p.max_wall_gradient, std::abs(jx.grad[0]));
      } else {
        p.min_gradient = std::min(p.min_gradient, jx.grad[0]);
      }
    }
  }
  p.positive_gradient = p.min_gradient > 0.0;
  p.swap_identity = p.max_swap_error <= tol;
  p.vanishing_on_wall = p.max_wall_gradient <= tol;
  return p;
}

struct MinimumReport {
  std::vector<double> point;  // chamber-reduced slice coordinates
  double value = 0.0;
  bool at_origin = false;
  bool on_diagonal = false;
  bool shadow_contains_origin = false;
  bool shadow_touches_hyperplane = false;
  std::string diagnostic;
  std::size_t newton_steps = 0;
};

inline constexpr double kLocationTolerance = 1e-6;
inline constexpr double kBoundaryProbe = 1e-6;

/// Coarse chamber grid, compass search (axis and diagonal moves, shrinking
/// steps), then Newton steps on the exact jet.
inline MinimumReport locate_minimum(const InvariantFunction& f, const ReinhardtShadow& shadow,
                                    std::size_t grid_n = kDefaultGridN) {
  if (shadow.rank() != f.rank) throw ConfigError("rank mismatch");
  const std::size_t r = f.rank;
  auto eval = [&](std::span<const double> a) -> double {
    std::vector<double> rho(r);
    for (std::size_t j = 0; j < r; ++j) rho[j] = std::abs(std::tanh(a[j]));
    if (!shadow.contains(rho)) return INFINITY;
    try {
      const double v = value_in(f, Chart::Slice, a);
      return std::isfinite(v) ? v : INFINITY;
    } catch (const DomainError&) {
      return INFINITY;
    }
  };

  std::vector<double> x;
  double fx = INFINITY;
  for (const auto& rho : chamber_grid(shadow, grid_n)) {
    const auto a = slice_of_moduli(rho);
    const double v = eval(a);
    if (v < fx) fx = v, x = a;
  }
  if (x.empty()) throw EvaluationError("locate_minimum: function is not finite anywhere on the grid");

  // Direction set {-1,0,1}^r \ {0}.
  std::vector<std::vector<double>> dirs;
  std::size_t count = 1;
  for (std::size_t j = 0; j < r; ++j) count *= 3;
  for (std::size_t d = 0; d < count; ++d) {
    std::vector<double> v(r);
    std::size_t code = d;
    bool zero = true;
    for (std::size_t j = 0; j < r; ++j) {
      v[j] = static_cast<double>(code % 3) - 1.0;
      code /= 3;
      zero = zero && v[j] == 0.0;
    }
    if (!zero) dirs.push_back(std::move(v));
  }

  const double coarse = std::atanh(std::min(0.999, 1.0 / static_cast<double>(grid_n)));
  std::vector<double> trial(r);
  for (double step = coarse; step > 1e-13; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& d : dirs) {
        for (std::size_t j = 0; j < r; ++j) trial[j] = x[j] + step * d[j];
        const double v = eval(trial);
        if (v < fx) {
          fx = v;
          x = trial;
          improved = true;
        }
      }
    }
  }

  MinimumReport rep;
  for (int it = 0; it < 20; ++it) {
    Jet2 jet;
    try {
      jet = to_slice(f, x);
    } catch (const Error&) {
      break;
    }
    if (linalg::min_eig(jet.hess) <= 0.0) break;
    std::vector<double> minus_g(jet.grad);
    for (double& v : minus_g) v = -v;
    const auto delta = linalg::solve(jet.hess, minus_g);
    for (std::size_t j = 0; j < r; ++j) trial[j] = x[j] + delta[j];
    const double v = eval(trial);
    if (!(v <= fx + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(fx))) break;
    fx = v;
    x = trial;
    ++rep.newton_steps;
    double size = 0.0;
    for (double d : delta) size = std::max(size, std::abs(d));
    if (size < 1e-15) break;
  }

  for (std::size_t j = 0; j < r; ++j) {
    for (double sgn : {-1.0, 1.0}) {
      trial = x;
      trial[j] += sgn * kBoundaryProbe;
      if (std::isinf(eval(trial)))
        throw EvaluationError("locate_minimum: minimizer lies on the shadow boundary; the function does not exhaust");
    }
  }

  rep.point = weyl_reduce(x).dominant;
  rep.value = fx;
  rep.at_origin = std::all_of(rep.point.begin(), rep.point.end(), [](double v) { return v < kLocationTolerance; });
  rep.on_diagonal = rep.point.front() - rep.point.back() < kLocationTolerance;
  const std::vector<double> zero(r, 0.0);
  rep.shadow_contains_origin = shadow.contains(zero);
  rep.shadow_touches_hyperplane = touches_hyperplane(shadow);
  if (rep.at_origin)
    rep.diagnostic = "minimizer at the origin";
  else if (rep.on_diagonal)
    rep.diagnostic = "minimizer on the diagonal a_1 = ... = a_r";
  else
    rep.diagnostic = "minimizer neither at the origin nor on the diagonal";
  return rep;
}

}  // namespace invpsh
