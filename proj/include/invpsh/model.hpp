#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace invpsh {

/// Largest rank supported anywhere in the library (orbit sizes and the
/// forward-mode jet width are bounded by it).
inline constexpr std::size_t kMaxRank = 8;

enum class SpaceKind { Tube, NonTube };

inline const char* to_string(SpaceKind k) { return k == SpaceKind::Tube ? "tube" : "non_tube"; }

/// Restricted-root data of an irreducible non-compact Hermitian symmetric
/// space: type C_r (tube) or BC_r (non-tube), root multiplicities and the
/// Killing constant b = B(A_j, A_j).
struct SymmetricSpaceModel {
  std::size_t rank = 1;
  SpaceKind kind = SpaceKind::Tube;
  int mult_medium = 2;
  int mult_short = 0;
  double killing_b = 8.0;

  static SymmetricSpaceModel tube(std::size_t r, double b = 8.0, int m = 2) {
    SymmetricSpaceModel s{r, SpaceKind::Tube, m, 0, b};
    s.validate();
    return s;
  }
  static SymmetricSpaceModel non_tube(std::size_t r, double b = 8.0, int m = 2, int m_short = 2) {
    SymmetricSpaceModel s{r, SpaceKind::NonTube, m, m_short, b};
    s.validate();
    return s;
  }

  bool is_tube() const noexcept { return kind == SpaceKind::Tube; }

  void validate() const {
    if (rank < 1 || rank > kMaxRank)
      throw ConfigError("model: rank must be in [1, " + std::to_string(kMaxRank) + "]");
    if (!(killing_b > 0.0) || !std::isfinite(killing_b)) throw ConfigError("model: killing_b must be positive");
    if (mult_medium < 1) throw ConfigError("model: mult_medium must be positive");
    if (kind == SpaceKind::Tube && mult_short != 0) throw ConfigError("model: tube type has no short roots");
    if (kind == SpaceKind::NonTube && (mult_short < 1 || mult_short % 2 != 0))
      throw ConfigError("model: mult_short must be a positive even integer for non-tube type");
  }
};

enum class RootType { Long, MediumPlus, MediumMinus, Short };

/// A positive restricted root: 2e_i, e_i+e_j, e_i-e_j or e_i (indices 0-based, i < j).
struct Root {
  RootType type;
  std::size_t i;
  std::size_t j;
  int multiplicity;

  std::string label() const {
    const auto e = [](std::size_t k) { return "e" + std::to_string(k + 1); };
    switch (type) {
      case RootType::Long: return "2" + e(i);
      case RootType::MediumPlus: return e(i) + "+" + e(j);
      case RootType::MediumMinus: return e(i) + "-" + e(j);
      case RootType::Short: return e(i);
    }
    return {};
  }
};

inline std::vector<Root> positive_roots(const SymmetricSpaceModel& m) {
  std::vector<Root> roots;
  for (std::size_t i = 0; i < m.rank; ++i) roots.push_back({RootType::Long, i, i, 1});
  for (std::size_t i = 0; i < m.rank; ++i) {
    for (std::size_t j = i + 1; j < m.rank; ++j) {
      roots.push_back({RootType::MediumPlus, i, j, m.mult_medium});
      roots.push_back({RootType::MediumMinus, i, j, m.mult_medium});
    }
  }
  if (!m.is_tube())
    for (std::size_t i = 0; i < m.rank; ++i) roots.push_back({RootType::Short, i, i, m.mult_short});
  return roots;
}

/// Total root-vector count, i.e. the sum of multiplicities over positive roots.
inline std::size_t root_vector_count(const SymmetricSpaceModel& m) {
  std::size_t n = 0;
  for (const Root& r : positive_roots(m)) n += static_cast<std::size_t>(r.multiplicity);
  return n;
}

/// Element of the hyperoctahedral group acting by (w·H)_i = signs[i] * H[perm[i]].
struct SignedPermutation {
  std::vector<std::size_t> perm;
  std::vector<int> signs;

  static SignedPermutation identity(std::size_t r) {
    SignedPermutation w;
    w.perm.resize(r);
    std::iota(w.perm.begin(), w.perm.end(), std::size_t{0});
    w.signs.assign(r, 1);
    return w;
  }

  std::size_t rank() const noexcept { return perm.size(); }

  bool is_identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != i || signs[i] != 1) return false;
    return true;
  }

  std::vector<double> apply(std::span<const double> h) const {
    if (h.size() != perm.size()) throw ConfigError("signed permutation: dimension mismatch");
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = signs[i] * h[perm[i]];
    return out;
  }

  /// (*this ∘ other)·H = (*this)·(other·H).
  SignedPermutation compose(const SignedPermutation& other) const {
    SignedPermutation w;
    w.perm.resize(rank());
    w.signs.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      w.perm[i] = other.perm[perm[i]];
      w.signs[i] = signs[i] * other.signs[perm[i]];
    }
    return w;
  }

  SignedPermutation inverse() const {
    SignedPermutation w;
    w.perm.resize(rank());
    w.signs.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) w.perm[perm[i]] = i;
    for (std::size_t k = 0; k < rank(); ++k) w.signs[k] = signs[w.perm[k]];
    return w;
  }

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

struct WeylReduction {
  std::vector<double> dominant;
  SignedPermutation w;  // dominant == w.apply(H)
};

/// Move H into the closed chamber a_1 >= ... >= a_r >= 0.
inline WeylReduction weyl_reduce(std::span<const double> h) {
  const std::size_t r = h.size();
  WeylReduction out{std::vector<double>(r), SignedPermutation::identity(r)};
  std::stable_sort(out.w.perm.begin(), out.w.perm.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(h[a]) > std::abs(h[b]); });
  for (std::size_t i = 0; i < r; ++i) {
    out.w.signs[i] = h[out.w.perm[i]] < 0.0 ? -1 : 1;
    out.dominant[i] = std::abs(h[out.w.perm[i]]);
  }
  return out;
}

inline bool in_chamber(std::span<const double> h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] < 0.0) return false;
    if (i + 1 < h.size() && h[i] < h[i + 1]) return false;
  }
  return true;
}

/// Visit every signed permutation of rank r (2^r * r! of them), identity first.
template <typename Fn>
void for_each_weyl_element(std::size_t r, Fn&& fn) {
  if (r > kMaxRank) throw ConfigError("Weyl group: rank exceeds " + std::to_string(kMaxRank));
  SignedPermutation w = SignedPermutation::identity(r);
  do {
    for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
      for (std::size_t i = 0; i < r; ++i) w.signs[i] = (mask >> i) & 1u ? -1 : 1;
      fn(static_cast<const SignedPermutation&>(w));
    }
  } while (std::next_permutation(w.perm.begin(), w.perm.end()));
}

inline std::vector<SignedPermutation> weyl_group(std::size_t r) {
  if (r > 6) throw ConfigError("weyl_group: materialized only up to rank 6; use for_each_weyl_element");
  std::vector<SignedPermutation> out;
  for_each_weyl_element(r, [&](const SignedPermutation& w) { out.push_back(w); });
  return out;
}

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Orbit average H ↦ mean_w g(w·H). The summands are sorted before being
/// added, so the result is bitwise identical across each orbit.
inline ScalarFunction weyl_symmetrize(ScalarFunction g, std::size_t r) {
  if (r > kMaxRank) throw ConfigError("weyl_symmetrize: rank exceeds " + std::to_string(kMaxRank));
  return [g = std::move(g), r](std::span<const double> h) {
    if (h.size() != r) throw ConfigError("weyl_symmetrize: dimension mismatch");
    std::vector<double> vals;
    for_each_weyl_element(r, [&](const SignedPermutation& w) { vals.push_back(g(w.apply(h))); });
    std::sort(vals.begin(), vals.end());
    double sum = 0.0;
    for (double v : vals) sum += v;
    return sum / static_cast<double>(vals.size());
  };
}

}  // namespace invpsh
