#include "catch_amalgamated.hpp"

#include <cmath>

#include "invpsh/cli.hpp"
#include "invpsh/io.hpp"

using namespace invpsh;
using io::json;

namespace {

json tube2() { return {{"rank", 2}, {"kind", "tube"}}; }

json annulus() {
  const double lo = std::exp(-2.0), hi = std::exp(-1.0);
  return {{"rank", 2}, {"boxes", json::array({{{"lo", {lo, lo}}, {"hi", {hi, hi}}}})}};
}

}  // namespace

TEST_CASE("model round trip") {
  const auto m = io::model_from_json({{"rank", 3}, {"kind", "non_tube"}, {"mult_medium", 4}, {"killing_b", 6.0}});
  CHECK(m.rank == 3);
  CHECK_FALSE(m.is_tube());
  CHECK(m.mult_short == 2);
  const auto back = io::model_from_json(io::to_json(m));
  CHECK(back.rank == m.rank);
  CHECK(back.kind == m.kind);
  CHECK(back.mult_medium == m.mult_medium);
  CHECK(back.mult_short == m.mult_short);
  CHECK(back.killing_b == m.killing_b);

  CHECK_THROWS_AS(io::model_from_json({{"rank", 2}, {"kind", "tube"}, {"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(io::model_from_json({{"rank", 2}, {"kind", "ball"}}), ConfigError);
  CHECK_THROWS_AS(io::model_from_json({{"rank", 2.5}, {"kind", "tube"}}), ConfigError);
  CHECK_THROWS_AS(io::model_from_json({{"kind", "tube"}}), ConfigError);
}

TEST_CASE("shadow round trip") {
  const auto s = io::shadow_from_json(annulus());
  CHECK(io::shadow_from_json(io::to_json(s)) == s);
  const auto l = io::shadow_from_json(
      {{"rank", 2}, {"boxes", json::array({{{"lo", {0.0, 0.0}}, {"hi", {1.0, 0.5}}}})}});
  CHECK(l.symmetrized());
  CHECK(io::shadow_from_json(io::to_json(l)) == l);
  CHECK_THROWS_AS(io::shadow_from_json({{"rank", 2}, {"boxes", json::array({{{"lo", {0.0}}, {"hi", {1.0}}}})}}),
                  ConfigError);
  CHECK_THROWS_AS(io::shadow_from_json({{"rank", 2}, {"boxes", json::array({{{"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}},
                                                                              {"open", true}}})}}),
                  ConfigError);
  CHECK_THROWS_AS(io::shadow_from_json({{"rank", 2}, {"boxes", "none"}}), ConfigError);
}

TEST_CASE("function specifications") {
  const auto m = io::model_from_json(tube2());
  const auto k = io::function_from_json({{"builtin", "killing_potential"}}, m);
  CHECK(k.chart == Chart::Slice);
  const auto e = io::function_from_json({{"expr", "t1 + t2"}}, m);
  CHECK(e.chart == Chart::Modulus);
  CHECK(io::to_json(e)["description"] == "t1 + t2");
  CHECK_THROWS_AS(io::function_from_json({{"expr", "t1"}, {"builtin", "killing_potential"}}, m), ConfigError);
  CHECK_THROWS_AS(io::function_from_json({{"builtin", "bergman"}}, m), ConfigError);
  CHECK_THROWS_AS(io::function_from_json({{"expr", "t1 +"}}, m), ParseError);
}

TEST_CASE("non-finite numbers become null") {
  CHECK(io::real(NAN).is_null());
  CHECK(io::real(INFINITY).is_null());
  CHECK(io::real(1.5) == 1.5);
  const auto m = SymmetricSpaceModel::tube(2);
  const auto rep = check_invariant_psh(m, killing_potential(m), ReinhardtShadow::full(2), 8);
  CHECK(io::to_json(rep)["min_short"].is_null());
}

TEST_CASE("levi-eval output") {
  const json out = cli::run("levi-eval", {{"model", tube2()},
                                          {"function", {{"builtin", "killing_potential"}}},
                                          {"points", {{0.3, -1.2}, {0.0, 0.0}}}});
  REQUIRE(out["results"].size() == 2);
  const json& r = out["results"][0];
  CHECK(r["a_block"][0][0].get<double>() == Catch::Approx(8.0));
  CHECK(r["medium_coeff"][0]["j"] == 1);
  CHECK(r["medium_coeff"][0]["l"] == 2);
  CHECK(r["point"] == json({1.2, 0.3}));
  CHECK(out["results"][1]["flags"].size() > 0);
}

TEST_CASE("command reports") {
  const json psh = cli::run("psh-check", {{"model", tube2()},
                                          {"function", {{"builtin", "killing_potential"}}},
                                          {"grid_n", 8}});
  CHECK(psh["report"]["verdict"] == "StrictlyPsh");

  const json cls = cli::run("stein-classify", {{"model", {{"rank", 2}, {"kind", "non_tube"}}}, {"shadow", annulus()}});
  CHECK(cls["classification"]["verdict"] == "NotStein");

  const json env = cli::run("envelope", {{"model", {{"rank", 2}, {"kind", "non_tube"}}}, {"shadow", annulus()}});
  CHECK(env["envelope_classification"]["verdict"] == "Stein");
  CHECK(env["envelope"]["boxes"].size() == 1);

  const json pot = cli::run("potential-eval", {{"model", {{"rank", 1}, {"kind", "tube"}}}, {"points", {{0.5}}},
                                               {"moduli", {0.1, 0.5}}});
  CHECK(pot["results"][0]["value"].get<double>() == Catch::Approx(4.0 * std::log(std::cosh(0.5))));
  CHECK_FALSE(pot["bergman"]["flagged"].get<bool>());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(cli::run("levi-eval", {{"model", tube2()}, {"function", {{"expr", "t1"}}}, {"points", {{0.1, 0.2}}},
                                         {"extra", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(cli::run("levi-eval", {{"model", tube2()}, {"function", {{"expr", "t1"}}}, {"points", {{0.1}}}}),
                  ConfigError);
  CHECK_THROWS_AS(cli::run("psh-check", {{"model", tube2()}, {"function", {{"expr", "t1"}}}, {"grid_n", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(cli::run("envelope", {{"model", tube2()}, {"shadow", annulus()}, {"grid_n", 3}}), ConfigError);
  CHECK_THROWS_AS(cli::run("potential-eval", {{"model", tube2()}}), ConfigError);
  CHECK_THROWS_AS(cli::run("frobnicate", json::object()), ConfigError);
}

TEST_CASE("output is deterministic") {
  const json cfg{{"model", tube2()}, {"function", {{"expr", "t1*t2 + exp(t1)"}}}, {"shadow", annulus()}, {"grid_n", 8}};
  CHECK(io::dump(cli::run("psh-check", cfg)) == io::dump(cli::run("psh-check", cfg)));
}
