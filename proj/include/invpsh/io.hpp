#pragma once

// JSON encoding of models, functions, shadows and reports. Objects are
// std::map backed, so keys come out sorted and output is byte-stable.
// Non-finite reals are written as null.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "funcspace.hpp"
#include "levi.hpp"
#include "model.hpp"
#include "potential.hpp"
#include "pshcheck.hpp"
#include "reinhardt.hpp"
#include "shadow.hpp"

namespace invpsh::io {

using json = nlohmann::json;

inline json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json reals(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(real(x));
  return out;
}

/// Reject keys outside `allowed`.
inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

inline double get_real(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline long long get_int(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

inline std::vector<double> get_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// Model

inline SymmetricSpaceModel model_from_json(const json& j) {
  check_keys(j, {"rank", "kind", "mult_medium", "mult_short", "killing_b"}, "model");
  if (!j.contains("rank") || !j.contains("kind")) throw ConfigError("model: 'rank' and 'kind' are required");
  SymmetricSpaceModel m;
  const long long r = get_int(j, "rank", "model");
  if (r < 1 || r > static_cast<long long>(kMaxRank)) throw ConfigError("model.rank out of range");
  m.rank = static_cast<std::size_t>(r);
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "tube") {
    m.kind = SpaceKind::Tube;
  } else if (kind == "non_tube") {
    m.kind = SpaceKind::NonTube;
    m.mult_short = 2;
  } else {
    throw ConfigError("model.kind must be \"tube\" or \"non_tube\"");
  }
  if (j.contains("mult_medium")) m.mult_medium = static_cast<int>(get_int(j, "mult_medium", "model"));
  if (j.contains("mult_short")) m.mult_short = static_cast<int>(get_int(j, "mult_short", "model"));
  if (j.contains("killing_b")) m.killing_b = get_real(j, "killing_b", "model");
  m.validate();
  return m;
}

inline json to_json(const SymmetricSpaceModel& m) {
  json j{{"rank", m.rank}, {"kind", to_string(m.kind)}, {"mult_medium", m.mult_medium}, {"killing_b", m.killing_b}};
  if (!m.is_tube()) j["mult_short"] = m.mult_short;
  return j;
}

inline json roots_json(const SymmetricSpaceModel& m) {
  json out = json::array();
  for (const Root& r : positive_roots(m)) out.push_back({{"label", r.label()}, {"multiplicity", r.multiplicity}});
  return out;
}

// Functions

inline InvariantFunction function_from_json(const json& j, const SymmetricSpaceModel& m) {
  check_keys(j, {"expr", "builtin", "chart"}, "function");
  const bool has_expr = j.contains("expr"), has_builtin = j.contains("builtin");
  if (has_expr == has_builtin) throw ConfigError("function: exactly one of 'expr' and 'builtin' is required");
  std::string chart_name;
  if (j.contains("chart")) {
    if (!j.at("chart").is_string()) throw ConfigError("function.chart: expected a string");
    chart_name = j.at("chart").get<std::string>();
  }
  if (has_builtin) {
    if (!j.at("builtin").is_string() || j.at("builtin").get<std::string>() != "killing_potential")
      throw ConfigError("function.builtin: the only builtin is \"killing_potential\"");
    return killing_potential(m, chart_name.empty() ? Chart::Slice : chart_from_string(chart_name));
  }
  if (!j.at("expr").is_string()) throw ConfigError("function.expr: expected a string");
  return parse_invariant(j.at("expr").get<std::string>(), m.rank,
                         chart_name.empty() ? Chart::Modulus : chart_from_string(chart_name));
}

inline json to_json(const InvariantFunction& f) {
  return {{"description", f.description}, {"chart", to_string(f.chart)}, {"rank", f.rank},
          {"symmetrized", f.symmetrized}};
}

// Shadows

inline ReinhardtShadow shadow_from_json(const json& j) {
  check_keys(j, {"rank", "boxes"}, "shadow");
  if (!j.contains("rank") || !j.contains("boxes")) throw ConfigError("shadow: 'rank' and 'boxes' are required");
  const long long r = get_int(j, "rank", "shadow");
  if (r < 1 || r > static_cast<long long>(kMaxRank)) throw ConfigError("shadow.rank out of range");
  if (!j.at("boxes").is_array()) throw ConfigError("shadow.boxes: expected an array");
  std::vector<Box> boxes;
  for (const auto& b : j.at("boxes")) {
    check_keys(b, {"lo", "hi"}, "shadow box");
    if (!b.contains("lo") || !b.contains("hi")) throw ConfigError("shadow box: 'lo' and 'hi' are required");
    Box box{get_vector(b.at("lo"), "shadow box lo"), get_vector(b.at("hi"), "shadow box hi")};
    if (box.lo.size() != static_cast<std::size_t>(r) || box.hi.size() != static_cast<std::size_t>(r))
      throw ConfigError("shadow box: corner dimension does not match rank");
    boxes.push_back(std::move(box));
  }
  return ReinhardtShadow::from_boxes(static_cast<std::size_t>(r), boxes);
}

inline json to_json(const ReinhardtShadow& s) {
  json boxes = json::array();
  for (const Box& b : s.boxes()) boxes.push_back({{"lo", b.lo}, {"hi", b.hi}});
  return {{"rank", s.rank()}, {"boxes", boxes}};
}

// Reports

inline json matrix_json(const linalg::Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(real(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const SignedPermutation& w) {
  std::vector<std::size_t> perm;
  for (std::size_t p : w.perm) perm.push_back(p + 1);
  return {{"perm", perm}, {"signs", w.signs}};
}

inline json to_json(const LeviBlockForm& f, const SymmetricSpaceModel& m) {
  json medium = json::array();
  for (const auto& e : f.medium) medium.push_back({{"j", e.j + 1}, {"l", e.l + 1}, {"value", real(e.value)}});
  json j{{"input", reals(f.input)},
         {"point", reals(f.point)},
         {"weyl_element", to_json(f.w)},
         {"kind", to_string(f.kind)},
         {"a_block", matrix_json(f.a_block)},
         {"medium_coeff", medium},
         {"short_coeff", reals(f.short_coeff)},
         {"flags", f.flags},
         {"short_coeff_factor", f.short_factor},
         {"normalization", "B(P,P) = b on every root-block basis vector; coefficients unweighted"},
         {"roots", roots_json(m)}};
  const BlockMinima mins = block_minima(f);
  j["min_a_block_eig"] = real(mins.a_eig);
  return j;
}

inline json to_json(const CheckReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"min_a_block_eig", real(r.min_a_block_eig)},
          {"min_medium", real(r.min_medium)},
          {"min_short", real(r.min_short)},
          {"witness_point", reals(r.witness_point)},
          {"grid_spec", r.grid_spec},
          {"points", r.points},
          {"tolerance", r.tolerance},
          {"stein_shadow", r.stein_shadow},
          {"certificate", r.certificate},
          {"note", r.note}};
}

inline json to_json(const Classification& c) {
  return {{"verdict", c.stein ? "Stein" : "NotStein"},
          {"nonempty", c.nonempty},
          {"complete", c.complete},
          {"connected", c.connected},
          {"log_convex", c.log_convex},
          {"touches_hyperplane", c.touches_hyperplane},
          {"stein_shadow", c.stein_shadow},
          {"reasons", c.reasons}};
}

inline json to_json(const LogConvexityReport& r) {
  return {{"log_convex", r.log_convex},     {"epsilon", r.epsilon},         {"worst_distance", real(r.worst_distance)},
          {"samples", r.samples},           {"witness_p", reals(r.witness_p)}, {"witness_q", reals(r.witness_q)},
          {"log_clip", kLogClip}};
}

inline json to_json(const MinimumReport& r) {
  return {{"point", reals(r.point)},
          {"value", real(r.value)},
          {"at_origin", r.at_origin},
          {"on_diagonal", r.on_diagonal},
          {"shadow_contains_origin", r.shadow_contains_origin},
          {"shadow_touches_hyperplane", r.shadow_touches_hyperplane},
          {"diagnostic", r.diagnostic},
          {"newton_steps", r.newton_steps}};
}

inline json to_json(const BergmanFit& b) {
  return {{"constant", real(b.constant)}, {"deviation", real(b.deviation)}, {"flagged", b.flagged}};
}

/// Sorted keys, two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace invpsh::io
