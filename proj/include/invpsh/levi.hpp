#pragma once

// Block decomposition of the Levi form of an invariant function at a slice
// point exp(H)K: an r x r block on the flat directions, one scalar per
// medium root pair e_j ± e_l and (non-tube) one scalar per short root e_j.
// All root-block coefficients use the normalization B(P,P) = b.

#include <cmath>
#include <complex>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "funcspace.hpp"
#include "jet.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace invpsh {

inline constexpr double kDegeneracyEps = 1e-6;

struct LeviOptions {
  int short_factor = 2;
  double eps = kDegeneracyEps;

  void validate() const {
    if (short_factor != 1 && short_factor != 2) throw ConfigError("short_coeff_factor must be 1 or 2");
    if (!(eps >= 0.0)) throw ConfigError("degeneracy threshold must be non-negative");
  }
};

using FlagSet = std::set<std::string>;

namespace levi {

inline std::string idx(std::size_t j) { return std::to_string(j + 1); }

/// 2 coth(2 a_j) g_j, or its limit f_jj for |a_j| <= eps.
inline double diagonal_term(const Jet2& jet, std::span<const double> h, std::size_t j, double eps,
                            FlagSet* flags = nullptr) {
  if (std::abs(h[j]) > eps) return 2.0 * jet.grad[j] / std::tanh(2.0 * h[j]);
  if (flags) flags->insert("limit:a" + idx(j));
  return jet.hess(j, j);
}

inline linalg::Matrix a_block(const Jet2& jet, std::span<const double> h, double eps = kDegeneracyEps,
                              FlagSet* flags = nullptr) {
  const std::size_t r = h.size();
  if (jet.size() != r) throw ConfigError("jet dimension does not match point");
  if (!jet.finite()) throw EvaluationError("jet is not finite");
  linalg::Matrix m = jet.hess;
  for (std::size_t j = 0; j < r; ++j) m(j, j) += diagonal_term(jet, h, j, eps, flags);
  return m;
}

/// The displayed medium-root formula, no limit handling.
inline double medium_generic(const Jet2& jet, std::span<const double> h, std::size_t j, std::size_t l) {
  const double den = std::sinh(h[j] + h[l]) * std::sinh(h[j] - h[l]);
  if (den == 0.0) throw DomainError("medium coefficient: point lies on a degeneracy hyperplane");
  return (std::sinh(2.0 * h[j]) * jet.grad[j] - std::sinh(2.0 * h[l]) * jet.grad[l]) / den;
}

/// Limit on {a_j = a_l}, symmetrized in j and l.
inline double medium_limit(const Jet2& jet, std::span<const double> h, std::size_t j, std::size_t l,
                           double eps = kDegeneracyEps) {
  const double tj = diagonal_term(jet, h, j, eps);
  const double tl = diagonal_term(jet, h, l, eps);
  return 0.5 * (tj + tl) + 0.5 * (jet.hess(j, j) - 2.0 * jet.hess(j, l) + jet.hess(l, l));
}

inline double medium_coeff(const Jet2& jet, std::span<const double> h, std::size_t j, std::size_t l,
                           double eps = kDegeneracyEps, FlagSet* flags = nullptr) {
  if (j >= l || l >= h.size()) throw ConfigError("medium coefficient needs indices j < l < rank");
  if (!in_chamber(h)) throw ConfigError("medium coefficient needs a chamber-reduced point");
  if (h[j] - h[l] > eps) return medium_generic(jet, h, j, l);
  if (flags) flags->insert("limit:e" + idx(j) + "-e" + idx(l) + (h[j] <= eps ? "@0" : ""));
  return medium_limit(jet, h, j, l, eps);
}

inline double short_generic(const Jet2& jet, std::span<const double> h, std::size_t j, int factor = 2) {
  if (h[j] == 0.0) throw DomainError("short coefficient: point lies on a degeneracy hyperplane");
  return factor * jet.grad[j] / std::tanh(h[j]);
}

inline double short_limit(const Jet2& jet, std::size_t j, int factor = 2) { return factor * jet.hess(j, j); }

inline double short_coeff(const Jet2& jet, std::span<const double> h, std::size_t j, int factor = 2,
                          double eps = kDegeneracyEps, FlagSet* flags = nullptr) {
  if (j >= h.size()) throw ConfigError("short coefficient: index out of range");
  if (!in_chamber(h)) throw ConfigError("short coefficient needs a chamber-reduced point");
  if (h[j] > eps) return short_generic(jet, h, j, factor);
  if (flags) flags->insert("limit:e" + idx(j));
  return short_limit(jet, j, factor);
}

}  // namespace levi

/// M_jl = f̃_jl + δ_jl T_j at any slice point H.
inline linalg::Matrix a_block(const InvariantFunction& f, std::span<const double> h, const LeviOptions& opt = {},
                              FlagSet* flags = nullptr) {
  return levi::a_block(to_slice(f, h), h, opt.eps, flags);
}

inline double medium_coeff(const InvariantFunction& f, std::span<const double> h, std::size_t j, std::size_t l,
                           const LeviOptions& opt = {}, FlagSet* flags = nullptr) {
  return levi::medium_coeff(to_slice(f, h), h, j, l, opt.eps, flags);
}

inline double short_coeff(const SymmetricSpaceModel& model, const InvariantFunction& f, std::span<const double> h,
                          std::size_t j, const LeviOptions& opt = {}, FlagSet* flags = nullptr) {
  if (model.is_tube()) throw ConfigError("short coefficients exist only for non-tube models");
  return levi::short_coeff(to_slice(f, h), h, j, opt.short_factor, opt.eps, flags);
}

struct MediumEntry {
  std::size_t j, l;  // 0-based, j < l
  double value;
};

struct LeviBlockForm {
  std::vector<double> input;
  std::vector<double> point;  // chamber-reduced
  SignedPermutation w;        // point == w.apply(input)
  SpaceKind kind = SpaceKind::Tube;
  linalg::Matrix a_block;
  std::vector<MediumEntry> medium;
  std::vector<double> short_coeff;  // empty for tube models
  std::vector<std::string> flags;
  int short_factor = 2;
  std::vector<Root> roots;
};

inline LeviBlockForm assemble(const SymmetricSpaceModel& model, const InvariantFunction& f,
                              std::span<const double> h, const LeviOptions& opt = {}) {
  model.validate();
  opt.validate();
  if (f.rank != model.rank || h.size() != model.rank) throw ConfigError("rank mismatch between model, function and point");
  LeviBlockForm out;
  out.input.assign(h.begin(), h.end());
  WeylReduction red = weyl_reduce(h);
  out.point = red.dominant;
  out.w = red.w;
  out.kind = model.kind;
  out.short_factor = opt.short_factor;
  out.roots = positive_roots(model);

  const Jet2 jet = to_slice(f, out.point);
  FlagSet flags;
  out.a_block = levi::a_block(jet, out.point, opt.eps, &flags);
  for (std::size_t j = 0; j < model.rank; ++j)
    for (std::size_t l = j + 1; l < model.rank; ++l)
      out.medium.push_back({j, l, levi::medium_coeff(jet, out.point, j, l, opt.eps, &flags)});
  if (!model.is_tube())
    for (std::size_t j = 0; j < model.rank; ++j)
      out.short_coeff.push_back(levi::short_coeff(jet, out.point, j, opt.short_factor, opt.eps, &flags));
  out.flags.assign(flags.begin(), flags.end());
  return out;
}

/// Smallest eigenvalue of the flat block and minima of the scalar blocks.
struct BlockMinima {
  double a_eig;
  double medium;  // +inf when there are no medium roots
  double short_;  // NaN for tube models
};

inline BlockMinima block_minima(const LeviBlockForm& form) {
  BlockMinima m{linalg::min_eig(form.a_block), INFINITY, NAN};
  for (const auto& e : form.medium) m.medium = std::min(m.medium, e.value);
  if (form.kind == SpaceKind::NonTube) {
    m.short_ = INFINITY;
    for (double v : form.short_coeff) m.short_ = std::min(m.short_, v);
  }
  return m;
}

inline constexpr double kPolarZero = 1e-12;

/// (∂²f/∂z̄_j∂z_l) for f given through its modulus jet, z in the unit polydisk.
inline linalg::CMatrix reinhardt_levi(const InvariantFunction& f, std::span<const std::complex<double>> z) {
  const std::size_t r = z.size();
  if (r != f.rank) throw ConfigError("point dimension does not match function rank");
  std::vector<double> rho(r), theta(r);
  for (std::size_t j = 0; j < r; ++j) {
    rho[j] = std::abs(z[j]);
    theta[j] = std::arg(z[j]);
    if (!(rho[j] < 1.0)) throw DomainError("point lies outside the unit polydisk");
  }
  const Jet2 jet = to_modulus(f, rho);
  linalg::CMatrix l(r);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < r; ++k) {
      if (j == k) {
        const double d = rho[j] < kPolarZero ? 2.0 * jet.hess(j, j) : jet.grad[j] / rho[j] + jet.hess(j, j);
        l(j, j) = 0.25 * d;
      } else if (rho[j] >= kPolarZero && rho[k] >= kPolarZero) {
        l(j, k) = 0.25 * std::polar(1.0, theta[j] - theta[k]) * jet.hess(j, k);
      }
    }
  }
  for (const auto& v : l.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw EvaluationError("Levi matrix is not finite");
  return l;
}

struct CongruenceReport {
  linalg::CMatrix lhs;  // 4 ∂²f/∂z̄∂z
  linalg::CMatrix rhs;  // C M C̄
  double discrepancy = 0.0;
};

/// Compare 4·reinhardt_levi with C·a_block·C̄, C = diag(cosh² a_j e^{iθ_j}), tanh a_j = |z_j|.
inline CongruenceReport congruence_check(const InvariantFunction& f, std::span<const std::complex<double>> z,
                                         const LeviOptions& opt = {}) {
  CongruenceReport rep;
  rep.lhs = reinhardt_levi(f, z);
  rep.lhs *= 4.0;
  const std::size_t r = z.size();
  std::vector<double> a(r);
  std::vector<std::complex<double>> c(r);
  for (std::size_t j = 0; j < r; ++j) {
    a[j] = std::atanh(std::abs(z[j]));
    const double ch = std::cosh(a[j]);
    c[j] = std::abs(z[j]) < kPolarZero ? std::complex<double>(ch * ch) : std::polar(ch * ch, std::arg(z[j]));
  }
  rep.rhs = linalg::congruence(c, a_block(f, a, opt));
  rep.discrepancy = linalg::max_abs_diff(rep.lhs, rep.rhs);
  return rep;
}

}  // namespace invpsh
