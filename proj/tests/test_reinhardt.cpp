#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "invpsh/reinhardt.hpp"
#include "invpsh/shadow.hpp"

using namespace invpsh;

namespace {

const double e1 = std::exp(-2.0), e2 = std::exp(-1.0);

ReinhardtShadow shadow(std::vector<Box> boxes, std::size_t r = 2) { return ReinhardtShadow::from_boxes(r, boxes); }

ReinhardtShadow full() { return ReinhardtShadow::full(2); }
ReinhardtShadow annulus() { return shadow({{{e1, e1}, {e2, e2}}}); }
ReinhardtShadow disconnected() { return shadow({{{0.1, 0.1}, {0.2, 0.2}}, {{0.5, 0.5}, {0.6, 0.6}}}); }
ReinhardtShadow l_shape() { return shadow({{{0.5, 0.0}, {1.0, 1.0}}, {{0.0, 0.5}, {0.5, 1.0}}}); }
ReinhardtShadow cross() { return shadow({{{0.0, 0.0}, {1.0, 0.5}}}); }

std::vector<double> v(std::initializer_list<double> x) { return x; }

const auto tube = SymmetricSpaceModel::tube(2);
const auto non_tube = SymmetricSpaceModel::non_tube(2);

}  // namespace

TEST_CASE("shadow construction") {
  const auto s = shadow({{{0.0, 0.0}, {1.0, 0.5}}});
  CHECK(s.symmetrized());
  CHECK(s.contains(v({0.2, 0.9})));
  CHECK(s.contains(v({0.9, 0.2})));
  CHECK_FALSE(s.contains(v({0.7, 0.7})));
  CHECK_FALSE(full().symmetrized());
  CHECK(full().contains(v({0.0, 0.999})));
  CHECK_FALSE(full().contains(v({1.0, 0.0})));

  // Canonical boxes are disjoint.
  const auto& boxes = s.boxes();
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      bool overlap = true;
      for (std::size_t k = 0; k < 2; ++k)
        overlap = overlap && boxes[i].lo[k] < boxes[j].hi[k] && boxes[j].lo[k] < boxes[i].hi[k];
      CHECK_FALSE(overlap);
    }
  CHECK(ReinhardtShadow::from_boxes(2, boxes) == s);

  CHECK_THROWS_AS(shadow({{{0.5, 0.0}, {0.4, 1.0}}}), ConfigError);
  CHECK_THROWS_AS(shadow({{{0.0, 0.0}, {1.5, 1.0}}}), ConfigError);
  CHECK_THROWS_AS(shadow({{{-0.1, 0.0}, {0.5, 1.0}}}), ConfigError);
  CHECK_THROWS_AS(shadow({{{0.0}, {0.5}}}), ConfigError);
  CHECK(shadow({}).empty());
}

TEST_CASE("completeness") {
  CHECK(is_complete(full()));
  CHECK_FALSE(is_complete(annulus()));
  CHECK(is_complete(cross()));
  CHECK_FALSE(is_complete(l_shape()));
  CHECK(is_complete(shadow({{{0.0, 0.0}, {0.3, 0.3}}})));
}

TEST_CASE("connectedness") {
  CHECK(is_connected(full()));
  CHECK(is_connected(cross()));
  CHECK_FALSE(is_connected(disconnected()));
  CHECK(is_connected(annulus()));
  // Corner contact counts as adjacent.
  CHECK(is_connected(shadow({{{0.1, 0.1}, {0.2, 0.2}}, {{0.2, 0.2}, {0.3, 0.3}}})));
}

TEST_CASE("log-convexity") {
  CHECK(is_log_convex(annulus()));
  CHECK(is_log_convex(full()));
  CHECK(is_log_convex(shadow({{{0.0, 0.0}, {0.5, 0.5}}})));
  const auto rep = log_convexity(disconnected());
  CHECK_FALSE(rep.log_convex);
  CHECK(rep.witness_p.size() == 2);
  CHECK(rep.witness_q.size() == 2);
  CHECK(rep.worst_distance > rep.epsilon);
  CHECK(rep.epsilon == Catch::Approx(2.0 / 64.0));
  CHECK_FALSE(is_log_convex(cross()));
}

TEST_CASE("Stein tests") {
  CHECK(is_stein(annulus()));
  CHECK(is_stein(full()));
  CHECK_FALSE(is_stein(l_shape()));
  CHECK_FALSE(is_stein(cross()));
}

TEST_CASE("classification") {
  CHECK(classify_domain(tube, annulus()).stein);
  const auto nt = classify_domain(non_tube, annulus());
  CHECK_FALSE(nt.stein);
  CHECK(nt.reasons == std::vector<std::string>{"not complete"});
  const auto two = classify_domain(tube, shadow({{{0.1, 0.1}, {0.15, 0.15}}, {{0.6, 0.6}, {0.7, 0.7}}}));
  CHECK_FALSE(two.stein);
  CHECK(std::find(two.reasons.begin(), two.reasons.end(), "not connected") != two.reasons.end());
  CHECK(classify_domain(non_tube, full()).stein);
  CHECK(classify_domain(tube, full()).stein);
  const auto l = classify_domain(tube, l_shape());
  CHECK_FALSE(l.stein);
  CHECK(l.reasons == std::vector<std::string>{"not log-convex", "meets a coordinate hyperplane but not complete"});
  CHECK_FALSE(classify_domain(tube, shadow({})).stein);
  CHECK_THROWS_AS(classify_domain(SymmetricSpaceModel::tube(3), full()), ConfigError);
}

TEST_CASE("envelope examples") {
  CHECK(envelope(tube, annulus()) == annulus());
  CHECK(envelope(tube, full()) == full());

  const auto ann = envelope(non_tube, annulus());
  CHECK(ann == shadow({{{0.0, 0.0}, {e2, e2}}}));
  CHECK(classify_domain(non_tube, ann).stein);

  // Membership frozen from tests/oracles/derive.py (exact log-convex hull of two squares).
  const auto joined = envelope(tube, disconnected());
  CHECK(classify_domain(tube, joined).stein);
  CHECK(is_subset(disconnected(), joined));
  CHECK(joined.contains(v({0.3, 0.3})));
  CHECK(joined.contains(v({0.25, 0.35})));
  CHECK_FALSE(joined.contains(v({0.15, 0.55})));
  CHECK_FALSE(joined.contains(v({0.12, 0.45})));
  CHECK_FALSE(joined.contains(v({0.55, 0.15})));
  CHECK_FALSE(joined.contains(v({0.05, 0.05})));

  const auto completed = envelope(non_tube, disconnected());
  CHECK(completed.contains(v({0.0, 0.0})));
  CHECK(classify_domain(non_tube, completed).stein);

  CHECK_THROWS_AS(envelope(tube, annulus(), 3), ConfigError);
}

TEST_CASE("envelope properties on the fixtures") {
  for (const auto& s : {full(), annulus(), disconnected(), l_shape(), cross(), shadow({{{0.0, 0.0}, {0.5, 0.5}}})}) {
    for (const auto& m : {tube, non_tube}) {
      const auto e = envelope(m, s);
      CHECK(is_subset(s, e));
      CHECK(classify_domain(m, e).stein);
      CHECK(envelope(m, e) == e);
    }
  }
}

TEST_CASE("envelope is monotone on grid-aligned inputs away from the hyperplanes") {
  auto g = [](std::size_t k) { return envelope_grid_modulus(k, 2, kDefaultGridN); };
  const auto small = shadow({{{g(300), g(300)}, {g(260), g(260)}}, {{g(120), g(120)}, {g(100), g(100)}}});
  const auto large = shadow({{{g(300), g(300)}, {g(260), g(260)}},
                             {{g(120), g(120)}, {g(100), g(100)}},
                             {{g(200), g(40)}, {g(180), g(20)}}});
  REQUIRE(is_subset(small, large));
  CHECK(is_subset(envelope(tube, small), envelope(tube, large)));
}

TEST_CASE("down-closure commutes with symmetrization") {
  const std::vector<Box> boxes{{{0.1, 0.3}, {0.4, 0.9}}, {{0.6, 0.05}, {0.7, 0.2}}};
  const CellSet raw = CellSet::from_boxes(2, boxes);
  CHECK(down_closure(symmetrize(raw)) == symmetrize(down_closure(raw)));
  const std::vector<Box> three{{{0.1, 0.3, 0.5}, {0.4, 0.9, 0.6}}};
  const CellSet r3 = CellSet::from_boxes(3, three);
  CHECK(down_closure(symmetrize(r3)) == symmetrize(down_closure(r3)));
}

TEST_CASE("rank three shadows") {
  const std::vector<Box> boxes{{{0.0, 0.0, 0.0}, {0.5, 0.5, 0.5}}};
  const auto s = ReinhardtShadow::from_boxes(3, boxes);
  const auto m = SymmetricSpaceModel::non_tube(3);
  CHECK(classify_domain(m, s).stein);
  const std::vector<Box> shell{{{0.2, 0.2, 0.2}, {0.5, 0.5, 0.5}}};
  const auto a = ReinhardtShadow::from_boxes(3, shell);
  CHECK(classify_domain(SymmetricSpaceModel::tube(3), a).stein);
  CHECK_FALSE(classify_domain(m, a).stein);
  const auto e = envelope(m, a, 16);
  CHECK(classify_domain(m, e, 16).stein);
  CHECK(e.contains(v({0.0, 0.0, 0.0})));
}
