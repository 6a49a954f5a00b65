// Library tour: Levi blocks of the Killing potential, a psh check, and a Stein envelope.

#include <cmath>
#include <iostream>
#include <vector>

#include "invpsh/io.hpp"
#include "invpsh/potential.hpp"
#include "invpsh/pshcheck.hpp"
#include "invpsh/reinhardt.hpp"

int main() {
  using namespace invpsh;
  const auto model = SymmetricSpaceModel::non_tube(2);

  const auto k = killing_potential(model);
  const std::vector<double> h{0.9, 0.4};
  std::cout << io::dump(io::to_json(assemble(model, k, h), model));

  const auto f = parse_invariant("t1*t2 + t1 + t2", 2);
  std::cout << io::dump(io::to_json(check_invariant_psh(model, f, ReinhardtShadow::full(2), 16)));

  const double lo = std::exp(-2.0), hi = std::exp(-1.0);
  const Box ring{{lo, lo}, {hi, hi}};
  const auto annulus = ReinhardtShadow::from_boxes(2, std::span<const Box>(&ring, 1));
  std::cout << io::dump(io::to_json(classify_domain(model, annulus)));
  std::cout << io::dump(io::to_json(envelope(model, annulus)));
}
