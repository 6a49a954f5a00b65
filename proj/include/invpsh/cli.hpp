#pragma once

// Batch commands: JSON config in, JSON report out.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "levi.hpp"
#include "model.hpp"
#include "potential.hpp"
#include "pshcheck.hpp"
#include "reinhardt.hpp"
#include "verify.hpp"

namespace invpsh::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEvaluation = 3;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"levi-eval", "psh-check", "stein-classify",
                                              "envelope",  "potential-eval", "verify"};
  return names;
}

namespace detail {

inline std::size_t grid_n(const json& c, std::size_t fallback, std::size_t minimum) {
  if (!c.contains("grid_n")) return fallback;
  const long long n = io::get_int(c, "grid_n", "config");
  if (n < static_cast<long long>(minimum) || n > 4096)
    throw ConfigError("config.grid_n must be in [" + std::to_string(minimum) + ", 4096]");
  return static_cast<std::size_t>(n);
}

inline LeviOptions levi_options(const json& c) {
  LeviOptions opt;
  if (c.contains("short_coeff_factor")) opt.short_factor = static_cast<int>(io::get_int(c, "short_coeff_factor", "config"));
  opt.validate();
  return opt;
}

inline const json& required(const json& c, const char* key) {
  if (!c.contains(key)) throw ConfigError(std::string("config: '") + key + "' is required");
  return c.at(key);
}

inline std::vector<std::vector<double>> points(const json& c, std::size_t r) {
  const json& p = required(c, "points");
  if (!p.is_array() || p.empty()) throw ConfigError("config.points: expected a non-empty array of points");
  std::vector<std::vector<double>> out;
  for (const auto& x : p) {
    out.push_back(io::get_vector(x, "config.points"));
    if (out.back().size() != r) throw ConfigError("config.points: point dimension does not match model rank");
  }
  return out;
}

inline ReinhardtShadow shadow_or_full(const json& c, std::size_t r) {
  if (!c.contains("shadow")) return ReinhardtShadow::full(r);
  ReinhardtShadow s = io::shadow_from_json(c.at("shadow"));
  if (s.rank() != r) throw ConfigError("shadow rank does not match model rank");
  return s;
}

}  // namespace detail

inline json levi_eval(const json& c) {
  io::check_keys(c, {"model", "function", "points", "short_coeff_factor"}, "config");
  const auto m = io::model_from_json(detail::required(c, "model"));
  const auto f = io::function_from_json(detail::required(c, "function"), m);
  const LeviOptions opt = detail::levi_options(c);
  json results = json::array();
  for (const auto& h : detail::points(c, m.rank)) results.push_back(io::to_json(assemble(m, f, h, opt), m));
  return {{"command", "levi-eval"}, {"model", io::to_json(m)}, {"function", io::to_json(f)}, {"results", results}};
}

inline json psh_check(const json& c) {
  io::check_keys(c, {"model", "function", "shadow", "grid_n", "tolerance", "short_coeff_factor"}, "config");
  const auto m = io::model_from_json(detail::required(c, "model"));
  const auto f = io::function_from_json(detail::required(c, "function"), m);
  const auto s = detail::shadow_or_full(c, m.rank);
  const std::size_t n = detail::grid_n(c, kDefaultGridN, 2);
  double tol = kDefaultTolerance;
  if (c.contains("tolerance")) tol = io::get_real(c, "tolerance", "config");
  if (!(tol >= 0.0)) throw ConfigError("config.tolerance must be non-negative");
  const CheckReport rep = check_invariant_psh(m, f, s, n, tol, detail::levi_options(c));
  return {{"command", "psh-check"},
          {"model", io::to_json(m)},
          {"function", io::to_json(f)},
          {"shadow", io::to_json(s)},
          {"report", io::to_json(rep)}};
}

inline json stein_classify(const json& c) {
  io::check_keys(c, {"model", "shadow", "grid_n"}, "config");
  const auto m = io::model_from_json(detail::required(c, "model"));
  const auto s = io::shadow_from_json(detail::required(c, "shadow"));
  if (s.rank() != m.rank) throw ConfigError("shadow rank does not match model rank");
  const std::size_t n = detail::grid_n(c, kDefaultGridN, 2);
  return {{"command", "stein-classify"},
          {"model", io::to_json(m)},
          {"shadow", io::to_json(s)},
          {"symmetrized", s.symmetrized()},
          {"grid_n", n},
          {"classification", io::to_json(classify_domain(m, s, n))},
          {"log_convexity", io::to_json(log_convexity(s, n))}};
}

inline json envelope_cmd(const json& c) {
  io::check_keys(c, {"model", "shadow", "grid_n"}, "config");
  const auto m = io::model_from_json(detail::required(c, "model"));
  const auto s = io::shadow_from_json(detail::required(c, "shadow"));
  if (s.rank() != m.rank) throw ConfigError("shadow rank does not match model rank");
  const std::size_t n = detail::grid_n(c, kDefaultGridN, 4);
  const ReinhardtShadow e = envelope(m, s, n);
  return {{"command", "envelope"},
          {"model", io::to_json(m)},
          {"shadow", io::to_json(s)},
          {"grid_n", n},
          {"input_classification", io::to_json(classify_domain(m, s, n))},
          {"envelope", io::to_json(e)},
          {"envelope_classification", io::to_json(classify_domain(m, e, n))},
          {"note", "minimal among shadows representable on the envelope grid"}};
}

inline json potential_eval(const json& c) {
  io::check_keys(c, {"model", "points", "moduli"}, "config");
  const auto m = io::model_from_json(detail::required(c, "model"));
  json out{{"command", "potential-eval"}, {"model", io::to_json(m)}};
  json results = json::array();
  if (c.contains("points")) {
    for (const auto& h : detail::points(c, m.rank)) {
      std::vector<double> moment;
      for (std::size_t j = 0; j < m.rank; ++j) moment.push_back(moment_coefficient(m, h, j));
      results.push_back({{"point", io::reals(h)},
                         {"value", io::real(potential_value(m, h))},
                         {"moment_coefficient", io::reals(moment)}});
    }
  }
  out["results"] = results;
  if (c.contains("moduli")) out["bergman"] = io::to_json(bergman_identify(m, io::get_vector(c.at("moduli"), "config.moduli")));
  if (!c.contains("points") && !c.contains("moduli")) throw ConfigError("config: 'points' or 'moduli' is required");
  return out;
}

inline verify::Options verify_options(const json& c, std::optional<std::uint64_t> seed) {
  io::check_keys(c, {"seed", "grid_n", "short_coeff_factor"}, "config");
  verify::Options opt;
  if (c.contains("seed")) {
    const long long s = io::get_int(c, "seed", "config");
    if (s < 0) throw ConfigError("config.seed must be non-negative");
    opt.seed = static_cast<std::uint64_t>(s);
  }
  if (seed) opt.seed = *seed;
  opt.grid_n = detail::grid_n(c, opt.grid_n, 2);
  opt.short_factor = detail::levi_options(c).short_factor;
  return opt;
}

/// Run one command. Throws ConfigError (exit 2) or another invpsh::Error (exit 3).
inline json run(const std::string& command, const json& config, std::optional<std::uint64_t> seed = {}) {
  if (command == "levi-eval") return levi_eval(config);
  if (command == "psh-check") return psh_check(config);
  if (command == "stein-classify") return stein_classify(config);
  if (command == "envelope") return envelope_cmd(config);
  if (command == "potential-eval") return potential_eval(config);
  if (command == "verify") {
    const verify::Options opt = verify_options(config, seed);
    json out = verify::to_json(verify::run_all(opt), opt);
    out["command"] = "verify";
    return out;
  }
  throw ConfigError("unknown command '" + command + "'");
}

inline json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace invpsh::cli
