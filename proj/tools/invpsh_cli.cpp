#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "invpsh/cli.hpp"

namespace {

using invpsh::cli::json;

int fail(int code, const std::string& kind, const std::string& message, const json& extra = json::object()) {
  json e = invpsh::cli::error_json(kind, message);
  for (const auto& [k, v] : extra.items()) e["error"][k] = v;
  std::cerr << e.dump() << "\n";
  return code;
}

const char* summary(const std::string& command) {
  if (command == "levi-eval") return "Levi block form of an invariant function at slice points";
  if (command == "psh-check") return "grid check of plurisubharmonicity on a shadow";
  if (command == "stein-classify") return "Stein classification of a shadow";
  if (command == "envelope") return "smallest Stein shadow containing the input, on a log grid";
  if (command == "potential-eval") return "Killing potential, moment coefficients and Bergman fit";
  return "run the identity and property suites";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levi forms, plurisubharmonicity and Stein tests for invariant functions and domains"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  for (const std::string& name : invpsh::cli::commands()) {
    CLI::App* sub = app.add_subcommand(name, summary(name));
    sub->add_option("--config", config_path, "JSON job config")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "seed for the random suites (verify)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : invpsh::cli::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      return fail(invpsh::cli::kExitConfig, "config", e.what());
    }
  } else if (command != "verify") {
    return fail(invpsh::cli::kExitConfig, "config", "--config is required for " + command);
  }

  json report;
  try {
    report = invpsh::cli::run(command, config, seed);
  } catch (const invpsh::ParseError& e) {
    return fail(invpsh::cli::kExitConfig, "parse", e.what(), {{"position", e.position()}});
  } catch (const invpsh::ConfigError& e) {
    return fail(invpsh::cli::kExitConfig, "config", e.what());
  } catch (const json::exception& e) {
    return fail(invpsh::cli::kExitConfig, "config", e.what());
  } catch (const invpsh::Error& e) {
    return fail(invpsh::cli::kExitEvaluation, "evaluation", e.what());
  }

  const std::string text = invpsh::io::dump(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!(out << text)) return fail(invpsh::cli::kExitEvaluation, "io", "cannot write " + out_path);
  }
  if (command == "verify" && !report.at("passed").get<bool>()) return invpsh::cli::kExitVerifyFailed;
  return invpsh::cli::kExitOk;
}
