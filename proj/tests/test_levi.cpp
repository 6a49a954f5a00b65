#include "catch_amalgamated.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "invpsh/funcspace.hpp"
#include "invpsh/levi.hpp"
#include "invpsh/potential.hpp"

using namespace invpsh;
using Catch::Approx;
using cd = std::complex<double>;

namespace {

std::vector<double> v(std::initializer_list<double> x) { return x; }

// f̃(a) = Σ a_j² in the slice chart.
InvariantFunction quadratic(std::size_t r) {
  return make_function(r, Chart::Slice, [](auto a) {
    auto s = a[0] * a[0];
    for (std::size_t j = 1; j < a.size(); ++j) s += a[j] * a[j];
    return s;
  });
}

bool has_flag(const LeviBlockForm& f, const std::string& flag) {
  return std::find(f.flags.begin(), f.flags.end(), flag) != f.flags.end();
}

}  // namespace

TEST_CASE("a_block of the quadratic") {
  const auto f = quadratic(2);
  const auto h = v({0.9, 0.4});
  const auto m = a_block(f, h);
  for (std::size_t j = 0; j < 2; ++j) CHECK(m(j, j) == Approx(4.0 * h[j] / std::tanh(2.0 * h[j]) + 2.0));
  CHECK(m(0, 1) == 0.0);
  FlagSet flags;
  const auto z = a_block(f, v({0.0, 0.0}), {}, &flags);
  CHECK(z(0, 0) == 4.0);
  CHECK(z(1, 1) == 4.0);
  CHECK(flags == FlagSet{"limit:a1", "limit:a2"});
}

TEST_CASE("a_block of |z|^4 on the disc") {
  const auto f = parse_invariant("t1^2", 1);
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    const double th = std::tanh(a), ch = std::cosh(a);
    CHECK(a_block(f, v({a}))(0, 0) == Approx(16.0 * th * th / std::pow(ch, 4)).epsilon(1e-12));
  }
  CHECK(a_block(f, v({0.0}))(0, 0) == 0.0);
}

TEST_CASE("Killing potential blocks are b") {
  for (double b : {8.0, 3.5}) {
    const auto m = SymmetricSpaceModel::non_tube(3, b);
    const auto f = killing_potential(m);
    for (const auto& h : {v({1.0, 2.0, 0.3}), v({0.5, 0.5, 0.0}), v({0.0, 0.0, 0.0}), v({-1.0, 1.0, 1.0})}) {
      const auto form = assemble(m, f, h);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(form.a_block(i, j) - (i == j ? b : 0.0)) < 1e-9);
      for (const auto& e : form.medium) CHECK(std::abs(e.value - b) < 1e-9);
      for (double s : form.short_coeff) CHECK(std::abs(s - b) < 1e-9);
    }
  }
}

TEST_CASE("frozen reference values for t1 + t2 + t1*t2") {
  // Reference values from tests/oracles/derive.py (symbolic differentiation).
  const auto m = SymmetricSpaceModel::non_tube(2);
  const auto f = parse_invariant("t1 + t2 + t1*t2", 2);
  const auto form = assemble(m, f, v({0.8, 0.3}));
  CHECK(form.a_block(0, 0) == Approx(1.35626400799995233530521436225).epsilon(1e-12));
  CHECK(form.a_block(0, 1) == Approx(0.395869616838413705468217608482).epsilon(1e-12));
  CHECK(form.a_block(1, 1) == Approx(4.82702489137529539097179868903).epsilon(1e-12));
  CHECK(form.medium[0].value == Approx(2.04644819076784937618319327183).epsilon(1e-12));
  CHECK(form.short_coeff[0] == Approx(2.42599315109010245215275749199).epsilon(1e-12));
  CHECK(form.flags.empty());

  const auto diag = assemble(m, f, v({0.5, 0.5}));
  CHECK(diag.medium[0].value == Approx(2.47400014674898666764297910589).epsilon(1e-10));
  CHECK(has_flag(diag, "limit:e1-e2"));

  const auto wall = assemble(m, f, v({0.6, 0.0}));
  CHECK(wall.a_block(1, 1) == Approx(5.15368894965110876498253145513).epsilon(1e-12));
  CHECK(has_flag(wall, "limit:a2"));
  CHECK(has_flag(wall, "limit:e2"));
}

TEST_CASE("medium coefficient examples") {
  const auto f = quadratic(2);
  const double a = 0.7;
  // Frozen: 4a coth a and 4a coth 2a + 2 at a = 0.7 (tests/oracles/derive.py).
  CHECK(medium_coeff(f, v({a, 0.0}), 0, 1) == Approx(4.632940580247362333197027986255).epsilon(1e-13));
  FlagSet flags;
  const double lim = medium_coeff(f, v({a, a}), 0, 1, {}, &flags);
  CHECK(lim == Approx(5.162585178087710061430676049473).epsilon(1e-13));
  CHECK(flags == FlagSet{"limit:e1-e2"});
  CHECK(std::abs(medium_coeff(f, v({a + 1e-8, a}), 0, 1, {2, 0.0}) - lim) < 1e-5);
  flags.clear();
  CHECK(medium_coeff(f, v({0.0, 0.0}), 0, 1, {}, &flags) == Approx(4.0));
  CHECK(flags.contains("limit:e1-e2@0"));
  CHECK_THROWS_AS(medium_coeff(f, v({0.3, 0.7}), 0, 1), ConfigError);
  CHECK_THROWS_AS(medium_coeff(f, v({0.7, 0.3}), 1, 1), ConfigError);
}

TEST_CASE("short coefficient examples") {
  const auto m = SymmetricSpaceModel::non_tube(2);
  const auto f = quadratic(2);
  CHECK(short_coeff(m, f, v({0.9, 0.4}), 1) == Approx(4.0 * 0.4 / std::tanh(0.4)));
  CHECK(short_coeff(m, f, v({0.9, 0.0}), 1) == Approx(4.0));
  CHECK_THROWS_AS(short_coeff(SymmetricSpaceModel::tube(2), f, v({0.9, 0.4}), 0), ConfigError);

  LeviOptions one;
  one.short_factor = 1;
  CHECK(short_coeff(m, killing_potential(m), v({0.9, 0.4}), 0, one) == Approx(4.0));
  LeviOptions bad;
  bad.short_factor = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const auto quartic = parse_invariant("t1^2", 2);
  double prev = INFINITY;
  for (double a : {0.3, 0.1, 0.03, 0.01}) {
    const double c = short_coeff(m, quartic, v({0.5, a}), 1);
    CHECK(c < prev);
    prev = c;
  }
  CHECK(short_coeff(m, quartic, v({0.5, 0.0}), 1) == 0.0);
}

TEST_CASE("generic formulas approach the limit branches") {
  for (const char* text : {"t1 + t2 + t1*t2", "exp(t1*t2*t3) + cosh(t1)", "1/(2 - t1) + t2^2*t3"}) {
    const auto f = parse_invariant(text, 3);
    const auto on = v({0.9, 0.9, 0.0});
    const auto jon = to_slice(f, on);
    const auto off = v({0.9 + 1e-8, 0.9, 1e-8});
    const auto joff = to_slice(f, off);
    CHECK(std::abs(levi::medium_generic(joff, off, 0, 1) - levi::medium_limit(jon, on, 0, 1)) < 1e-5);
    CHECK(std::abs(levi::diagonal_term(joff, off, 2, 0.0) - levi::diagonal_term(jon, on, 2, kDegeneracyEps)) < 1e-5);
    CHECK(std::abs(levi::short_generic(joff, off, 2) - levi::short_limit(jon, 2)) < 1e-5);
    const auto zon = v({0.9, 0.0, 0.0}), zoff = v({0.9, 2e-8, 1e-8});
    CHECK(std::abs(levi::medium_generic(to_slice(f, zoff), zoff, 1, 2) -
                   levi::medium_limit(to_slice(f, zon), zon, 1, 2)) < 1e-5);
  }
}

TEST_CASE("assemble shapes and W-equivariance") {
  const auto t1 = SymmetricSpaceModel::tube(1);
  const auto one = assemble(t1, parse_invariant("t1", 1), v({0.4}));
  CHECK(one.a_block.size() == 1);
  CHECK(one.medium.empty());
  CHECK(one.short_coeff.empty());

  const auto m = SymmetricSpaceModel::non_tube(3);
  const auto f = parse_invariant("exp(t1) * t2 + t3^2", 3);
  const auto h = v({-0.4, 1.3, 0.8});
  const auto base = assemble(m, f, h);
  CHECK(base.point == v({1.3, 0.8, 0.4}));
  CHECK(base.w.apply(h) == base.point);
  CHECK(base.medium.size() == 3);
  CHECK(base.short_coeff.size() == 3);
  for (const auto& w : weyl_group(3)) {
    const auto other = assemble(m, f, w.apply(h));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(other.a_block(i, j) - base.a_block(i, j)) <= 1e-12);
      CHECK(std::abs(other.medium[i].value - base.medium[i].value) <= 1e-12);
      CHECK(std::abs(other.short_coeff[i] - base.short_coeff[i]) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(assemble(m, f, v({1.0, 2.0})), ConfigError);
}

TEST_CASE("reinhardt_levi examples") {
  const auto quartic = parse_invariant("t1^2", 1);
  for (double r : {0.2, 0.5, 0.9}) {
    const std::vector<cd> z{std::polar(r, 1.1)};
    CHECK(reinhardt_levi(quartic, z)(0, 0).real() == Approx(4.0 * r * r));
  }
  const std::vector<cd> zero{0.0};
  CHECK(reinhardt_levi(quartic, zero)(0, 0) == cd(0.0));

  // Frozen: 2 / (1 - |z|^2)^2 at |z|^2 = 1/4 (tests/oracles/derive.py).
  const auto disc = parse_invariant("-2*log(1 - t1)", 1);
  const std::vector<cd> half{cd(0.3, 0.4)};
  CHECK(reinhardt_levi(disc, half)(0, 0).real() == Approx(3.555555555555555555555556).epsilon(1e-13));

  const auto sum = parse_invariant("t1 + t2", 2);
  const std::vector<cd> z2{cd(0.3, -0.2), cd(0.0, 0.0)};
  const auto l = reinhardt_levi(sum, z2);
  CHECK(std::abs(l(0, 0) - cd(1.0)) < 1e-14);
  CHECK(std::abs(l(1, 1) - cd(1.0)) < 1e-14);
  CHECK(l(0, 1) == cd(0.0));

  // Frozen Wirtinger derivatives of t1*t2 + (t1^2 + t2^2)/2 (tests/oracles/derive.py).
  const auto g = parse_invariant("t1*t2 + (t1^2 + t2^2)/2", 2);
  const std::vector<cd> z{cd(0.3, 0.2), cd(-0.1, 0.4)};
  const auto w = reinhardt_levi(g, z);
  CHECK(std::abs(w(0, 0) - cd(0.43, 0.0)) < 1e-14);
  CHECK(std::abs(w(1, 1) - cd(0.47, 0.0)) < 1e-14);
  CHECK(std::abs(w(0, 1) - cd(0.05, -0.14)) < 1e-14);
  CHECK(std::abs(w(1, 0) - cd(0.05, 0.14)) < 1e-14);

  const std::vector<cd> outside{cd(1.0, 0.0)};
  CHECK_THROWS_AS(reinhardt_levi(disc, outside), DomainError);
}

TEST_CASE("congruence check examples") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> mod(0.05, 0.95), ang(-3.0, 3.0);
  const auto sum = parse_invariant("t1 + t2", 2);
  for (int k = 0; k < 20; ++k) {
    const std::vector<cd> z{std::polar(mod(rng), ang(rng)), std::polar(mod(rng), ang(rng))};
    CHECK(congruence_check(sum, z).discrepancy < 1e-8);
  }
  const auto killing = killing_potential(SymmetricSpaceModel::tube(1), Chart::Modulus);
  const std::vector<cd> half{cd(0.5, 0.0)};
  CHECK(congruence_check(killing, half).discrepancy < 1e-8);
  const auto quartic = parse_invariant("t1^2", 1);
  const std::vector<cd> zero{cd(0.0)};
  const auto rep = congruence_check(quartic, zero);
  CHECK(rep.lhs(0, 0) == cd(0.0));
  CHECK(rep.rhs(0, 0) == cd(0.0));
}
