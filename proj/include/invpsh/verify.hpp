#pragma once

// Oracle suites behind the `verify` command. Each suite recomputes an
// identity two independent ways (or against a closed form) over seeded
// random inputs and reports its worst discrepancy against a pinned tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "funcspace.hpp"
#include "io.hpp"
#include "jet.hpp"
#include "levi.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "potential.hpp"
#include "pshcheck.hpp"
#include "reinhardt.hpp"

namespace invpsh::verify {

using json = nlohmann::json;

struct Options {
  std::uint64_t seed = 0;
  std::size_t grid_n = 32;
  int short_factor = 2;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t checks = 0;
  json details = json::object();
};

inline json to_json(const SuiteResult& s) {
  return {{"name", s.name},           {"passed", s.passed},   {"worst", io::real(s.worst)},
          {"tolerance", s.tolerance}, {"checks", s.checks},   {"details", s.details}};
}

/// Seeded generator of smooth invariant test functions in the modulus chart.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  static std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
  }

  /// Sum of `terms` random smooth terms with coefficients of either sign.
  std::string general(std::size_t r, std::size_t terms) {
    std::string out;
    for (std::size_t k = 0; k < terms; ++k) {
      const double c = uniform(0.2, 2.0) * (index(2) == 0 ? -1.0 : 1.0);
      out += (k ? " + " : "") + num(c) + "*" + general_term(r);
    }
    return out;
  }

  /// Sum of `terms` plurisubharmonic terms with positive coefficients.
  std::string psh(std::size_t r, std::size_t terms) {
    std::string out;
    for (std::size_t k = 0; k < terms; ++k) out += (k ? " + " : "") + num(uniform(0.1, 2.0)) + "*" + psh_term(r);
    return out;
  }

  /// (b/4)-scaled Killing potential -(b/4) Σ log(1 - t_j) as an expression.
  static std::string killing(std::size_t r, double b = 8.0) {
    std::string out;
    for (std::size_t j = 1; j <= r; ++j) out += "-" + num(b / 4.0) + "*log(1-t" + std::to_string(j) + ")";
    return out;
  }

 private:
  std::string var(std::size_t j) { return "t" + std::to_string(j); }

  std::pair<std::string, std::string> pair(std::size_t r) {
    const std::size_t j = index(r) + 1;
    std::size_t l = index(r) + 1;
    if (r > 1)
      while (l == j) l = index(r) + 1;
    return {var(j), var(l)};
  }

  std::string general_term(std::size_t r) {
    const auto [a, b] = pair(r);
    const std::string c = num(uniform(0.2, 1.5));
    switch (index(11)) {
      case 0: return a;
      case 1: return a + "^2";
      case 2: return a + "*" + b;
      case 3: return "exp(" + c + "*" + a + ")";
      case 4: return "log(1+" + c + "*" + a + ")";
      case 5: return "cosh(" + c + "*" + a + ")";
      case 6: return "sinh(" + c + "*" + a + ")";
      case 7: return "tanh(" + c + "*" + a + "*" + b + ")";
      case 8: return "(" + a + "+" + b + ")^3";
      case 9: return "1/(2-" + a + ")";
      default: return a + "^2*" + b;
    }
  }

  std::string psh_term(std::size_t r) {
    const auto [a, b] = pair(r);
    const std::string c = num(uniform(0.2, 0.9));
    switch (index(8)) {
      case 0: return a;
      case 1: return a + "^2";
      case 2: return a + "*" + b;
      case 3: return "exp(" + c + "*" + a + ")";
      case 4: return "exp(" + c + "*(" + a + "+" + b + "))";
      case 5: return "(-log(1-" + c + "*" + a + "))";
      case 6: return "(" + a + "+" + b + ")^2";
      default: return "1/(2-" + a + ")";
    }
  }

  std::mt19937_64 rng_;
};

inline std::vector<double> random_point(ExprGen& g, std::size_t r, double lo, double hi) {
  std::vector<double> h(r);
  for (double& x : h) x = g.uniform(lo, hi);
  return h;
}

inline std::vector<double> random_chamber(ExprGen& g, std::size_t r, double lo, double hi) {
  auto h = random_point(g, r, lo, hi);
  std::sort(h.rbegin(), h.rend());
  return h;
}

inline void finish(SuiteResult& s) { s.passed = s.passed && s.worst <= s.tolerance; }

// Killing potential: a_block = b I and every root coefficient = b.
inline SuiteResult calibration(const Options& opt) {
  SuiteResult s{"calibration", true, 0.0, 1e-9};
  ExprGen g(opt.seed + 1);
  LeviOptions lo;
  lo.short_factor = opt.short_factor;
  json per_model = json::array();
  for (int nt = 0; nt < 2; ++nt) {
    for (std::size_t r = 1; r <= 4; ++r) {
      const auto m = nt ? SymmetricSpaceModel::non_tube(r) : SymmetricSpaceModel::tube(r);
      const auto f = killing_potential(m);
      const double b = m.killing_b;
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        const auto h = random_point(g, r, -3.0, 3.0);
        const auto form = assemble(m, f, h, lo);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) worst = std::max(worst, std::abs(form.a_block(i, j) - (i == j ? b : 0.0)));
        for (const auto& e : form.medium) worst = std::max(worst, std::abs(e.value - b));
        for (double v : form.short_coeff) worst = std::max(worst, std::abs(v - b));
        ++s.checks;
      }
      per_model.push_back({{"model", io::to_json(m)}, {"worst", worst}});
      s.worst = std::max(s.worst, worst);
    }
  }
  s.details["models"] = per_model;
  s.details["short_coeff_factor"] = opt.short_factor;
  finish(s);
  return s;
}

// coth(t) rhohat'(t) + rhohat''(t) = 1.
inline SuiteResult rho_hat_identity(const Options&) {
  SuiteResult s{"rho_hat_identity", true, 0.0, 1e-12};
  for (int k = 1; k <= 1000; ++k) {
    const double t = 0.01 * k;
    const RhoHat rh = rho_hat(t);
    s.worst = std::max(s.worst, std::abs(rh.d1 / std::tanh(t) + rh.d2 - 1.0));
    ++s.checks;
  }
  const RhoHat zero = rho_hat(0.0);
  s.details["rho_hat_at_zero"] = zero.value;
  s.passed = zero.value == 0.0 && zero.d1 == 0.0;
  finish(s);
  return s;
}

inline SuiteResult bergman(const Options& opt) {
  SuiteResult s{"bergman", true, 0.0, 1e-10};
  ExprGen g(opt.seed + 2);
  std::vector<double> moduli(1000);
  for (double& x : moduli) x = g.uniform(1e-6, 1.0 - 1e-6);
  const BergmanFit fit = bergman_identify(SymmetricSpaceModel::tube(1), moduli);
  s.worst = std::max(fit.deviation, std::abs(fit.constant));
  s.checks = moduli.size();
  s.details = io::to_json(fit);
  finish(s);
  return s;
}

// 4 ∂²f/∂z̄∂z against C · a_block · C̄.
inline SuiteResult congruence(const Options& opt) {
  SuiteResult s{"congruence", true, 0.0, 1e-7};
  ExprGen g(opt.seed + 3);
  LeviOptions lo;
  lo.short_factor = opt.short_factor;
  for (int k = 0; k < 100; ++k) {
    const std::size_t r = 1 + g.index(3);
    const std::string text = g.general(r, 1 + g.index(3));
    const auto f = parse_invariant(text, r);
    std::vector<std::complex<double>> z(r);
    for (auto& zj : z) zj = std::polar(g.uniform(0.05, 0.95), g.uniform(-M_PI, M_PI));
    const double d = congruence_check(f, z, lo).discrepancy;
    if (d > s.worst) {
      s.worst = d;
      s.details["worst_function"] = text;
    }
    ++s.checks;
  }
  finish(s);
  return s;
}

// Forward-mode slice jets against central finite differences.
inline SuiteResult chain_rule(const Options& opt) {
  SuiteResult s{"chain_rule", true, 0.0, 1.0};  // worst is the error relative to the pinned bound
  ExprGen g(opt.seed + 4);
  for (int k = 0; k < 5; ++k) {
    const std::size_t r = 1 + g.index(3);
    const auto f = parse_invariant(g.general(r, 2), r);
    const ScalarFunction slice = scalar_in(f, Chart::Slice);
    for (int p = 0; p < 100; ++p) {
      const auto h = random_point(g, r, -1.5, 1.5);
      const Jet2 exact = to_slice(f, h);
      const Jet2 fd = fd_jet(slice, h);
      const double bound = std::max(1e-6, 1e-4 * std::abs(exact.value));
      double err = 0.0;
      for (std::size_t i = 0; i < r; ++i) {
        err = std::max(err, std::abs(exact.grad[i] - fd.grad[i]));
        for (std::size_t j = 0; j < r; ++j) err = std::max(err, std::abs(exact.hess(i, j) - fd.hess(i, j)));
      }
      s.worst = std::max(s.worst, err / bound);
      ++s.checks;
    }
  }
  s.details["bound"] = "max(1e-6, 1e-4 |value|) per component";
  finish(s);
  return s;
}

// a_block against the log-chart Hessian: M_jl = 4/(sinh 2a_j sinh 2a_l) ∂²f̂/∂s_j∂s_l.
inline SuiteResult log_chart_identity(const Options& opt) {
  SuiteResult s{"log_chart_identity", true, 0.0, 1e-8};
  ExprGen g(opt.seed + 5);
  for (int k = 0; k < 50; ++k) {
    const std::size_t r = 1 + g.index(3);
    const auto f = parse_invariant(g.general(r, 2), r);
    const auto h = random_point(g, r, 0.05, 2.0);
    std::vector<double> sv(r);
    for (std::size_t j = 0; j < r; ++j) sv[j] = std::log(std::tanh(h[j]));
    const linalg::Matrix m = a_block(f, h, LeviOptions{});
    const Jet2 jl = to_log(f, sv);
    const double scale = std::max(1.0, linalg::max_abs(m));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const double rhs = 4.0 / (std::sinh(2.0 * h[i]) * std::sinh(2.0 * h[j])) * jl.hess(i, j);
        s.worst = std::max(s.worst, std::abs(m(i, j) - rhs) / scale);
      }
    ++s.checks;
  }
  finish(s);
  return s;
}

// Generic block formulas at 1e-8 from each degeneracy hyperplane against the limit branches.
inline SuiteResult limit_continuity(const Options& opt) {
  SuiteResult s{"limit_continuity", true, 0.0, 1e-5};
  ExprGen g(opt.seed + 6);
  constexpr double d = 1e-8;
  double worst_a = 0.0, worst_eq = 0.0, worst_zero = 0.0, worst_short = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t r = 2 + g.index(2);
    const auto f = parse_invariant(g.general(r, 3), r);
    const auto base = random_chamber(g, r, 0.1, 1.5);
    const int factor = opt.short_factor;

    // a_j = 0: T_j.
    auto on = base, off = base;
    on[r - 1] = 0.0;
    off[r - 1] = d;
    Jet2 jon = to_slice(f, on), joff = to_slice(f, off);
    worst_a = std::max(worst_a, std::abs(levi::diagonal_term(joff, off, r - 1, 0.0) -
                                         levi::diagonal_term(jon, on, r - 1, kDegeneracyEps)));
    // Short root at a_j = 0.
    worst_short = std::max(worst_short, std::abs(levi::short_generic(joff, off, r - 1, factor) -
                                                 levi::short_limit(jon, r - 1, factor)));

    // a_j = a_l > 0.
    on = base;
    on[1] = on[0];
    off = on;
    off[0] += d;
    jon = to_slice(f, on);
    joff = to_slice(f, off);
    worst_eq = std::max(worst_eq, std::abs(levi::medium_generic(joff, off, 0, 1) - levi::medium_limit(jon, on, 0, 1)));

    // a_j = a_l = 0.
    on = base;
    on[r - 2] = on[r - 1] = 0.0;
    off = on;
    off[r - 2] = 2.0 * d;
    off[r - 1] = d;
    jon = to_slice(f, on);
    joff = to_slice(f, off);
    worst_zero = std::max(worst_zero, std::abs(levi::medium_generic(joff, off, r - 2, r - 1) -
                                               levi::medium_limit(jon, on, r - 2, r - 1)));
    s.checks += 4;
  }
  s.worst = std::max({worst_a, worst_eq, worst_zero, worst_short});
  s.details = {{"a_block_at_zero", worst_a},
               {"medium_on_diagonal", worst_eq},
               {"medium_at_origin", worst_zero},
               {"short_at_zero", worst_short},
               {"offset", d}};
  finish(s);
  return s;
}

// |z|^4 on the disc: psh, not strictly psh at the origin; a_block = 16 tanh²a / cosh⁴a.
inline SuiteResult counterexample(const Options& opt) {
  SuiteResult s{"counterexample", true, 0.0, 1e-12};
  const auto m = SymmetricSpaceModel::tube(1);
  const auto f = parse_invariant("t1^2", 1);
  const CheckReport rep = check_invariant_psh(m, f, ReinhardtShadow::full(1), std::max<std::size_t>(opt.grid_n, 2));
  const double zero[1] = {0.0};
  const double at_zero = a_block(f, zero)(0, 0);
  for (int k = 1; k <= 40; ++k) {
    const double a = 0.1 * k;
    const double h[1] = {a};
    const double th = std::tanh(a), ch = std::cosh(a);
    const double expected = 16.0 * th * th / (ch * ch * ch * ch);
    s.worst = std::max(s.worst, std::abs(a_block(f, h)(0, 0) - expected));
    ++s.checks;
  }
  const double witness = rep.witness_point.empty() ? INFINITY : std::abs(rep.witness_point[0]);
  s.passed = rep.verdict == Verdict::PshNotStrict && witness < 1e-6 && at_zero == 0.0;
  s.details = {{"verdict", to_string(rep.verdict)}, {"witness_distance", witness}, {"a_block_at_zero", at_zero}};
  finish(s);
  return s;
}

struct TransferCase {
  SymmetricSpaceModel model;
  ReinhardtShadow shadow;
  std::string name;
};

inline std::vector<TransferCase> transfer_cases() {
  const double e1 = std::exp(-2.0), e2 = std::exp(-1.0);
  const Box sub{{0.0, 0.0}, {0.8, 0.8}}, ann{{e1, e1}, {e2, e2}};
  return {{SymmetricSpaceModel::tube(2), ReinhardtShadow::full(2), "tube, full"},
          {SymmetricSpaceModel::non_tube(2), ReinhardtShadow::full(2), "non_tube, full"},
          {SymmetricSpaceModel::tube(2), ReinhardtShadow::from_boxes(2, std::span<const Box>(&sub, 1)), "tube, [0,0.8)^2"},
          {SymmetricSpaceModel::non_tube(2), ReinhardtShadow::from_boxes(2, std::span<const Box>(&sub, 1)),
           "non_tube, [0,0.8)^2"},
          {SymmetricSpaceModel::tube(2), ReinhardtShadow::from_boxes(2, std::span<const Box>(&ann, 1)), "tube, annulus"}};
}

// Stein shadows: a_block positive definite on the whole grid forces every
// root coefficient positive on the grid.
inline SuiteResult positivity_transfer(const Options& opt) {
  SuiteResult s{"positivity_transfer", true, 0.0, 0.0};
  ExprGen g(opt.seed + 7);
  LeviOptions lo;
  lo.short_factor = opt.short_factor;
  const auto cases = transfer_cases();
  std::size_t qualifying = 0, violations = 0;
  double min_coeff = INFINITY;
  for (int k = 0; k < 20; ++k) {
    const TransferCase& c = cases[static_cast<std::size_t>(k) % cases.size()];
    if (!classify_domain(c.model, c.shadow).stein) throw EvaluationError("positivity transfer: fixture is not Stein");
    const double delta = g.uniform(0.01, 0.3) * (g.index(2) ? 1.0 : -1.0);
    const std::string text = ExprGen::killing(2) + " + " + ExprGen::num(delta) + "*(" + g.general(2, 2) + ")";
    const auto f = parse_invariant(text, 2);
    bool pd = true;
    double lowest = INFINITY;
    for (const auto& rho : chamber_grid(c.shadow, std::max<std::size_t>(opt.grid_n, 2))) {
      const auto form = assemble(c.model, f, slice_of_moduli(rho), lo);
      const BlockMinima bm = block_minima(form);
      pd = pd && bm.a_eig > 0.0;
      lowest = std::min({lowest, bm.medium, c.model.is_tube() ? INFINITY : bm.short_});
      ++s.checks;
    }
    if (!pd) continue;
    ++qualifying;
    min_coeff = std::min(min_coeff, lowest);
    if (!(lowest > 0.0)) ++violations;
  }
  s.worst = static_cast<double>(violations);
  s.details = {{"functions", 20},
               {"qualifying", qualifying},
               {"violations", violations},
               {"min_root_coefficient", io::real(min_coeff)}};
  s.passed = qualifying > 0;
  finish(s);
  return s;
}

// Minimizers: on the diagonal for an annular shadow, at the origin for complete shadows.
inline SuiteResult minimum_location(const Options& opt) {
  SuiteResult s{"minimum_location", true, 0.0, kLocationTolerance};
  ExprGen g(opt.seed + 8);
  const std::size_t grid = std::max<std::size_t>(opt.grid_n, 2);
  const auto tube = SymmetricSpaceModel::tube(2);
  const double e1 = std::exp(-2.0), e2 = std::exp(-1.0);
  const Box ann{{e1, e1}, {e2, e2}}, sub{{0.0, 0.0}, {0.9, 0.9}};
  const auto annulus = ReinhardtShadow::from_boxes(2, std::span<const Box>(&ann, 1));
  const auto complete = ReinhardtShadow::from_boxes(2, std::span<const Box>(&sub, 1));
  const std::string barrier = " - log(s1+2) - log(-1-s1) - log(s2+2) - log(-1-s2)";

  double worst_diag = 0.0, worst_origin = 0.0, worst_orbit = 0.0;
  bool all_strict = true;
  json cases = json::array();
  auto record = [&](const InvariantFunction& f, const ReinhardtShadow& sh, bool diagonal) {
    const CheckReport pre = check_invariant_psh(tube, f, sh, grid);
    all_strict = all_strict && pre.verdict == Verdict::StrictlyPsh;
    const MinimumReport mr = locate_minimum(f, sh, grid);
    const double err = diagonal ? mr.point[0] - mr.point[1] : std::max(mr.point[0], mr.point[1]);
    (diagonal ? worst_diag : worst_origin) = std::max(diagonal ? worst_diag : worst_origin, std::abs(err));
    for (const auto& w : weyl_group(2)) {
      const auto y = w.apply(mr.point);
      worst_orbit = std::max(worst_orbit, std::abs(value_in(f, Chart::Slice, y) - mr.value));
    }
    cases.push_back({{"function", f.description}, {"verdict", to_string(pre.verdict)}, {"minimum", io::to_json(mr)}});
    s.checks += 1;
  };

  for (int k = 0; k < 5; ++k) {
    const std::string mu = ExprGen::num(g.uniform(-1.9, -1.1));
    const std::string text = ExprGen::num(g.uniform(0.2, 3.0)) + "*(s1+s2-2*(" + mu + "))^2 + " +
                             ExprGen::num(g.uniform(0.2, 3.0)) + "*(s1-s2)^2" + barrier;
    record(parse_invariant(text, 2, Chart::Log), annulus, true);
  }
  record(killing_potential(tube), ReinhardtShadow::full(2), false);
  for (int k = 0; k < 2; ++k)
    record(parse_invariant(ExprGen::killing(2) + " + " + g.psh(2, 2), 2), ReinhardtShadow::full(2), false);
  for (int k = 0; k < 2; ++k)
    record(parse_invariant("-log(0.81-t1) - log(0.81-t2) + " + g.psh(2, 2), 2), complete, false);

  s.worst = std::max(worst_diag, worst_origin);
  s.details = {{"diagonal_error", worst_diag},
               {"origin_error", worst_origin},
               {"orbit_value_spread", worst_orbit},
               {"all_strictly_psh", all_strict},
               {"cases", cases}};
  s.passed = all_strict && worst_orbit <= 1e-10;
  finish(s);
  return s;
}

struct ClassificationFixture {
  std::string name;
  std::vector<Box> boxes;
  bool tube_stein, non_tube_stein;
};

inline std::vector<ClassificationFixture> classification_fixtures() {
  const double e1 = std::exp(-2.0), e2 = std::exp(-1.0);
  return {
      {"full", {{{0, 0}, {1, 1}}}, true, true},
      {"complete square", {{{0, 0}, {0.5, 0.5}}}, true, true},
      {"annulus", {{{e1, e1}, {e2, e2}}}, true, false},
      {"disconnected", {{{0.1, 0.1}, {0.2, 0.2}}, {{0.5, 0.5}, {0.6, 0.6}}}, false, false},
      {"L-shape", {{{0.5, 0}, {1, 1}}, {{0, 0.5}, {0.5, 1}}}, false, false},
      {"union", {{{0, 0}, {1, 0.5}}}, false, false},
  };
}

inline constexpr std::size_t kClassificationGridN = 64;

inline SuiteResult classification(const Options&) {
  SuiteResult s{"classification", true, 0.0, 0.0};
  std::size_t wrong = 0;
  json rows = json::array();
  for (const auto& fx : classification_fixtures()) {
    const auto shadow = ReinhardtShadow::from_boxes(2, fx.boxes);
    for (int nt = 0; nt < 2; ++nt) {
      const auto m = nt ? SymmetricSpaceModel::non_tube(2) : SymmetricSpaceModel::tube(2);
      const bool expected = nt ? fx.non_tube_stein : fx.tube_stein;
      const Classification c = classify_domain(m, shadow, kClassificationGridN);
      const ReinhardtShadow env = envelope(m, shadow, kClassificationGridN);
      const bool env_stein = classify_domain(m, env, kClassificationGridN).stein;
      const bool idempotent = envelope(m, env, kClassificationGridN) == env;
      const bool extensive = is_subset(shadow, env);
      const bool fixed = !c.stein || env == shadow;
      const bool ok = c.stein == expected && env_stein && idempotent && extensive && fixed;
      if (!ok) ++wrong;
      rows.push_back({{"fixture", fx.name},
                      {"model", to_string(m.kind)},
                      {"classification", io::to_json(c)},
                      {"expected", expected ? "Stein" : "NotStein"},
                      {"envelope_stein", env_stein},
                      {"envelope_idempotent", idempotent},
                      {"envelope_boxes", env.boxes().size()},
                      {"ok", ok}});
      ++s.checks;
    }
  }
  s.worst = static_cast<double>(wrong);
  s.details = {{"fixtures", rows}, {"grid_n", kClassificationGridN}};
  finish(s);
  return s;
}

// Rank-two diagnostics on generated strictly psh T⋉S₂-invariant functions.
inline SuiteResult convess(const Options& opt) {
  SuiteResult s{"convess", true, 0.0, 1e-10};
  ExprGen g(opt.seed + 9);
  const auto tube = SymmetricSpaceModel::tube(2);
  const std::size_t grid = std::max<std::size_t>(std::min<std::size_t>(opt.grid_n, 16), 2);
  std::size_t property_failures = 0, unfalsified = 0, not_strict = 0;
  double min_g11 = INFINITY;
  for (int k = 0; k < 20; ++k) {
    const std::string text = ExprGen::num(g.uniform(0.2, 2.0)) + "*(" + ExprGen::killing(2) + ") + " + g.psh(2, 2);
    const auto f = parse_invariant(text, 2);
    if (check_invariant_psh(tube, f, ReinhardtShadow::full(2), grid).verdict != Verdict::StrictlyPsh) ++not_strict;
    const ConvessProperties p = convess_properties(f);
    if (!p.all()) ++property_failures;
    s.worst = std::max({s.worst, p.max_swap_error, p.max_wall_gradient});
    if (convess_scan(f, 2.0, 1.0).nonpositive == 0) ++unfalsified;
    min_g11 = std::min(min_g11, convess_scan(f, 1.0, 1.0).min_value);
    ++s.checks;
  }
  s.details = {{"property_failures", property_failures},
               {"unfalsified_2_1", unfalsified},
               {"not_strictly_psh", not_strict},
               {"min_G_1_1", io::real(min_g11)}};
  s.passed = property_failures == 0 && unfalsified == 0 && not_strict == 0;
  finish(s);
  return s;
}

// assemble(f, w·H) == assemble(f, H), and parsed functions are W-invariant.
inline SuiteResult weyl_equivariance(const Options& opt) {
  SuiteResult s{"weyl_equivariance", true, 0.0, 1e-10};
  ExprGen g(opt.seed + 10);
  double worst_assemble = 0.0, worst_orbit = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t r = 1 + g.index(3);
    const auto m = k % 2 ? SymmetricSpaceModel::non_tube(r) : SymmetricSpaceModel::tube(r);
    const auto f = parse_invariant(g.general(r, 2), r);
    const auto h = random_point(g, r, -2.0, 2.0);
    const auto group = weyl_group(r);
    const auto& w = group[g.index(group.size())];
    const auto a = assemble(m, f, h), b = assemble(m, f, w.apply(h));
    double d = 0.0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) d = std::max(d, std::abs(a.a_block(i, j) - b.a_block(i, j)));
    for (std::size_t i = 0; i < a.medium.size(); ++i) d = std::max(d, std::abs(a.medium[i].value - b.medium[i].value));
    for (std::size_t i = 0; i < a.short_coeff.size(); ++i) d = std::max(d, std::abs(a.short_coeff[i] - b.short_coeff[i]));
    worst_assemble = std::max(worst_assemble, d);
    worst_orbit = std::max(worst_orbit, orbit_deviation(f, h));
    ++s.checks;
  }
  s.worst = worst_orbit;
  s.passed = worst_assemble <= 1e-12;
  s.details = {{"assemble_difference", worst_assemble}, {"orbit_deviation", worst_orbit}};
  finish(s);
  return s;
}

struct Report {
  std::vector<SuiteResult> suites;
  bool passed = true;
};

inline Report run_all(const Options& opt) {
  struct Entry {
    const char* name;
    SuiteResult (*fn)(const Options&);
  };
  static constexpr Entry kSuites[] = {
      {"calibration", calibration},
      {"rho_hat_identity", rho_hat_identity},
      {"bergman", bergman},
      {"congruence", congruence},
      {"chain_rule", chain_rule},
      {"log_chart_identity", log_chart_identity},
      {"limit_continuity", limit_continuity},
      {"counterexample", counterexample},
      {"positivity_transfer", positivity_transfer},
      {"minimum_location", minimum_location},
      {"classification", classification},
      {"convess", convess},
      {"weyl_equivariance", weyl_equivariance},
  };
  if (opt.grid_n < 2) throw ConfigError("verify: grid_n must be at least 2");
  if (opt.short_factor != 1 && opt.short_factor != 2) throw ConfigError("short_coeff_factor must be 1 or 2");
  Report rep;
  for (const Entry& e : kSuites) {
    SuiteResult res;
    try {
      res = e.fn(opt);
    } catch (const Error& err) {
      res = SuiteResult{e.name, false, INFINITY, 0.0};
      res.details = {{"error", err.what()}};
    }
    rep.passed = rep.passed && res.passed;
    rep.suites.push_back(std::move(res));
  }
  return rep;
}

inline json to_json(const Report& r, const Options& opt) {
  json suites = json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s));
  return {{"passed", r.passed},
          {"seed", opt.seed},
          {"grid_n", opt.grid_n},
          {"short_coeff_factor", opt.short_factor},
          {"suites", suites}};
}

}  // namespace invpsh::verify
