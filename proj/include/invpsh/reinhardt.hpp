#pragma once

// Completeness, connectedness, log-convexity and Steinness of Reinhardt
// shadows, the invariant-domain classification and Stein envelopes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "shadow.hpp"

namespace invpsh {

inline constexpr double kLogClip = -20.0;
inline constexpr std::size_t kDefaultGridN = 64;

inline bool is_complete(const ReinhardtShadow& s) {
  return !s.empty() && down_closure(s.cells()) == s.cells();
}

inline bool is_connected(const ReinhardtShadow& s) { return cells_connected(s.cells()); }

inline bool touches_hyperplane(const ReinhardtShadow& s) { return touches_hyperplane(s.cells()); }

struct LogConvexityReport {
  bool log_convex = true;
  double epsilon = 0.0;
  double worst_distance = 0.0;
  std::size_t samples = 0;
  std::vector<double> witness_p;  // log coordinates
  std::vector<double> witness_q;
};

namespace detail {

struct LogBox {
  std::vector<double> lo, hi;
};

inline double clipped_log(double x) { return x <= std::exp(kLogClip) ? kLogClip : std::log(x); }

inline std::vector<LogBox> log_boxes(const ReinhardtShadow& s) {
  std::vector<LogBox> out;
  for (const Box& b : s.boxes()) {
    LogBox l;
    bool keep = true;
    for (std::size_t j = 0; j < b.lo.size(); ++j) {
      if (b.hi[j] <= std::exp(kLogClip)) keep = false;
      l.lo.push_back(clipped_log(b.lo[j]));
      l.hi.push_back(clipped_log(b.hi[j]));
    }
    if (keep) out.push_back(std::move(l));
  }
  return out;
}

inline double distance_sq(const LogBox& b, std::span<const double> p) {
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double e = p[j] < b.lo[j] ? b.lo[j] - p[j] : (p[j] > b.hi[j] ? p[j] - b.hi[j] : 0.0);
    d += e * e;
  }
  return d;
}

}  // namespace detail

/// Grid test of log-convexity of S ∩ (0,1)^r: midpoints of sampled pairs must
/// lie within eps = 2/grid_n of the closed log image (log clipped at -20).
inline LogConvexityReport log_convexity(const ReinhardtShadow& s, std::size_t grid_n = kDefaultGridN) {
  if (grid_n < 2) throw ConfigError("grid_n must be at least 2");
  LogConvexityReport rep;
  rep.epsilon = 2.0 / static_cast<double>(grid_n);
  const auto boxes = detail::log_boxes(s);
  if (boxes.empty()) return rep;
  const std::size_t r = s.rank();

  constexpr std::size_t kBudget = 2048;
  const double per_box = static_cast<double>(kBudget) / static_cast<double>(boxes.size());
  std::size_t m = static_cast<std::size_t>(std::floor(std::pow(per_box, 1.0 / static_cast<double>(r)) + 1e-9));
  m = std::clamp<std::size_t>(m, 2, std::max<std::size_t>(2, grid_n));

  std::vector<std::vector<double>> pts;
  for (const auto& b : boxes) {
    std::vector<std::size_t> k(r, 0);
    for (;;) {
      std::vector<double> p(r);
      for (std::size_t j = 0; j < r; ++j)
        p[j] = b.lo[j] + (b.hi[j] - b.lo[j]) * static_cast<double>(k[j]) / static_cast<double>(m - 1);
      pts.push_back(std::move(p));
      std::size_t j = r;
      bool done = true;
      while (j-- > 0) {
        if (++k[j] < m) {
          done = false;
          break;
        }
        k[j] = 0;
      }
      if (done) break;
    }
  }
  rep.samples = pts.size();

  const double eps_sq = rep.epsilon * rep.epsilon;
  std::size_t hint = 0;
  std::vector<double> mid(r);
  double worst_sq = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      for (std::size_t j = 0; j < r; ++j) mid[j] = 0.5 * (pts[a][j] + pts[b][j]);
      double best = detail::distance_sq(boxes[hint], mid);
      if (best > 0.0) {
        for (std::size_t i = 0; i < boxes.size() && best > 0.0; ++i) {
          const double d = detail::distance_sq(boxes[i], mid);
          if (d < best) {
            best = d;
            hint = i;
          }
        }
      }
      if (best > worst_sq) {
        worst_sq = best;
        if (best > eps_sq) {
          rep.witness_p = pts[a];
          rep.witness_q = pts[b];
        }
      }
    }
  }
  rep.worst_distance = std::sqrt(worst_sq);
  rep.log_convex = worst_sq <= eps_sq;
  return rep;
}

inline bool is_log_convex(const ReinhardtShadow& s, std::size_t grid_n = kDefaultGridN) {
  return log_convexity(s, grid_n).log_convex;
}

inline bool is_stein(const ReinhardtShadow& s, std::size_t grid_n = kDefaultGridN) {
  if (s.empty()) return false;
  if (touches_hyperplane(s)) return is_complete(s) && is_log_convex(s, grid_n);
  return is_log_convex(s, grid_n);
}

struct Classification {
  bool stein = false;
  bool nonempty = false;
  bool complete = false;
  bool connected = false;
  bool log_convex = false;
  bool touches_hyperplane = false;
  bool stein_shadow = false;
  std::vector<std::string> reasons;
};

inline Classification classify_domain(const SymmetricSpaceModel& model, const ReinhardtShadow& s,
                                      std::size_t grid_n = kDefaultGridN) {
  if (s.rank() != model.rank) throw ConfigError("shadow rank does not match model rank");
  Classification c;
  c.nonempty = !s.empty();
  if (!c.nonempty) {
    c.reasons.push_back("empty");
    return c;
  }
  c.complete = is_complete(s);
  c.connected = is_connected(s);
  c.log_convex = is_log_convex(s, grid_n);
  c.touches_hyperplane = touches_hyperplane(s);
  c.stein_shadow = c.touches_hyperplane ? (c.complete && c.log_convex) : c.log_convex;
  if (!c.log_convex) c.reasons.push_back("not log-convex");
  if (c.touches_hyperplane && !c.complete) c.reasons.push_back("meets a coordinate hyperplane but not complete");
  if (model.is_tube()) {
    if (!c.connected) c.reasons.push_back("not connected");
    c.stein = c.stein_shadow && c.connected;
  } else {
    if (!c.complete && !c.touches_hyperplane) c.reasons.push_back("not complete");
    c.stein = c.stein_shadow && c.complete;
  }
  return c;
}

/// Step of the uniform log grid used by `envelope`: cell diagonals equal 1/grid_n,
/// half the fattening used by the log-convexity test.
inline double envelope_log_step(std::size_t rank, std::size_t grid_n) {
  return 1.0 / (static_cast<double>(grid_n) * std::sqrt(static_cast<double>(rank)));
}

/// Modulus e^{-k h} of the k-th breakpoint of the envelope grid; inputs built
/// from these values are grid-aligned.
inline double envelope_grid_modulus(std::size_t k, std::size_t rank, std::size_t grid_n) {
  return std::exp(-static_cast<double>(k) * envelope_log_step(rank, grid_n));
}

namespace detail {

struct HalfSpace {
  std::vector<double> normal;
  double offset;  // normal · x <= offset
};

inline double determinant(std::vector<double> a, std::size_t n) {
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a[i * n + c]) > std::abs(a[piv * n + c])) piv = i;
    if (a[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const double f = a[i * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[i * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

/// Supporting half-spaces of conv(points) through every affinely independent
/// r-subset (brute force; the point sets here are small).
inline std::vector<HalfSpace> hull_facets(const std::vector<std::vector<double>>& pts, std::size_t r) {
  const std::size_t n = pts.size();
  double scale = 1.0;
  for (const auto& p : pts)
    for (double x : p) scale = std::max(scale, std::abs(x));
  const double tol = 1e-9 * scale;

  double combos = 1.0;
  for (std::size_t k = 0; k < r; ++k) combos = combos * static_cast<double>(n - k) / static_cast<double>(k + 1);
  if (n < r || combos * static_cast<double>(n) > 2e9)
    throw ConfigError("envelope: too many hull vertices (" + std::to_string(n) + "); use a coarser shadow");

  std::vector<HalfSpace> out;
  std::vector<std::size_t> pick(r);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<double> diff((r - 1) * r), minor((r - 1) * (r - 1));
  for (;;) {
    const auto& p0 = pts[pick[0]];
    for (std::size_t i = 1; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) diff[(i - 1) * r + k] = pts[pick[i]][k] - p0[k];
    // Generalized cross product: normal_k = (-1)^k det(diff without column k).
    std::vector<double> normal(r);
    double norm = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t i = 0; i + 1 < r; ++i)
        for (std::size_t c = 0, cc = 0; c < r; ++c)
          if (c != k) minor[i * (r - 1) + cc++] = diff[i * r + c];
      normal[k] = (k % 2 ? -1.0 : 1.0) * determinant(minor, r - 1);
      norm += normal[k] * normal[k];
    }
    norm = std::sqrt(norm);
    if (norm > 1e-12 * std::pow(scale, static_cast<double>(r - 1))) {
      for (double& x : normal) x /= norm;
      const double c0 = std::inner_product(normal.begin(), normal.end(), p0.begin(), 0.0);
      double lo = 0.0, hi = 0.0;
      for (const auto& p : pts) {
        const double d = std::inner_product(normal.begin(), normal.end(), p.begin(), 0.0) - c0;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      if (hi <= tol) out.push_back({normal, c0});
      if (lo >= -tol) {
        for (double& x : normal) x = -x;
        out.push_back({normal, -c0});
      }
    }
    std::size_t i = r;
    while (i-- > 0) {
      if (pick[i] < n - r + i) break;
      if (i == 0) return out;
    }
    ++pick[i];
    for (std::size_t k = i + 1; k < r; ++k) pick[k] = pick[k - 1] + 1;
  }
}

}  // namespace detail

/// Smallest grid-representable Stein shadow containing S for the model type:
/// log-convex hull, plus down-closure for non-tube or hyperplane-touching input.
///
/// The hull is exact (facets of the convex hull of the clipped log-box corners);
/// it is rounded outward onto a uniform log grid anchored at modulus 1, with
/// cell k = [e^{-(k+1)h}, e^{-kh}). For lower sets the last index stands for
/// the slab [0, e^{-Kh}).
inline ReinhardtShadow envelope(const SymmetricSpaceModel& model, const ReinhardtShadow& s,
                                std::size_t grid_n = kDefaultGridN) {
  if (s.empty()) throw ConfigError("envelope: shadow is empty");
  if (grid_n < 4) throw ConfigError("envelope: grid_n " + std::to_string(grid_n) + " is too coarse; use at least 4");
  if (classify_domain(model, s, grid_n).stein) return s;

  const bool lower = !model.is_tube() || touches_hyperplane(s);
  const ReinhardtShadow s1 = lower ? ReinhardtShadow::from_cells(down_closure(s.cells())) : s;
  if (lower && classify_domain(model, s1, grid_n).stein) return s1;

  const std::size_t r = s.rank();
  const double h = envelope_log_step(r, grid_n);
  constexpr double kSnap = 1e-9;

  double min_log = 0.0;
  for (const Box& b : s1.boxes())
    for (std::size_t j = 0; j < r; ++j) {
      if (b.lo[j] > 0.0) min_log = std::min(min_log, detail::clipped_log(b.lo[j]));
      min_log = std::min(min_log, detail::clipped_log(b.hi[j]));
    }
  const std::size_t K = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(-min_log / h - kSnap)));
  const std::size_t n = K + (lower ? 1 : 0);
  const double bottom = -static_cast<double>(n) * h;

  std::vector<std::vector<double>> corners;
  for (const Box& b : s1.boxes()) {
    if (std::any_of(b.hi.begin(), b.hi.end(), [](double x) { return x <= std::exp(kLogClip); })) continue;
    for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
      std::vector<double> p(r);
      for (std::size_t j = 0; j < r; ++j) {
        const bool up = (mask >> j) & 1u;
        p[j] = up ? detail::clipped_log(b.hi[j]) : (b.lo[j] > 0.0 ? detail::clipped_log(b.lo[j]) : bottom);
      }
      corners.push_back(std::move(p));
    }
  }
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  const auto facets = detail::hull_facets(corners, r);

  // Grid cells (log index k ↦ CellSet index m-1-k) meeting every facet half-space.
  std::vector<double> bp;
  if (lower) bp.push_back(0.0);
  for (std::size_t k = K + 1; k-- > 0;) bp.push_back(k == 0 ? 1.0 : std::exp(-static_cast<double>(k) * h));
  CellSet cells(r, bp);
  const std::size_t m = cells.per_axis();
  if (m != n) throw EvaluationError("envelope: inconsistent grid");
  const double tol = 1e-9 * std::max(1.0, -bottom);
  for (std::size_t c = 0; c < cells.total(); ++c) {
    bool inside = true;
    for (const auto& f : facets) {
      double lo = 0.0;
      for (std::size_t j = 0; j < r && inside; ++j) {
        const double k = static_cast<double>(m - 1 - cells.coord(c, j));
        lo += f.normal[j] * (f.normal[j] > 0.0 ? -(k + 1.0) * h : -k * h);
      }
      if (lo > f.offset + tol) {
        inside = false;
        break;
      }
    }
    if (inside) cells.set(c);
  }
  if (lower) cells = down_closure(cells);
  ReinhardtShadow out = ReinhardtShadow::from_cells(set_union(cells, s1.cells()));

  if (!classify_domain(model, out, grid_n).stein)
    throw EvaluationError("envelope: grid hull is not Stein at grid_n " + std::to_string(grid_n) +
                          "; try grid_n " + std::to_string(2 * grid_n));
  return out;
}

}  // namespace invpsh
