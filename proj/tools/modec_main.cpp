#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "modec/commands.hpp"

namespace {

modec::ValueVec parse_point(const std::string& text) {
  modec::ValueVec out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    out.push_back(std::stod(field));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime Pareto front construction by oracle decomposition"};
  app.require_subcommand(1);

  std::string config_path;
  std::string truth_path;
  std::string front_path;
  std::string ref_text;
  std::string oracle_override;
  int utilities = 100;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "Execute a configured search");
  run->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  run->add_option("--oracle", oracle_override,
                  "override the configured oracle, e.g. external:<command>");

  CLI::App* verify =
      app.add_subcommand("verify", "Audit a finished run's outputs");
  verify->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  verify->add_option("--truth", truth_path,
                     "true front CSV (defaults to the enumerated front)");

  CLI::App* metrics =
      app.add_subcommand("metrics", "Front quality metrics from files");
  metrics->add_option("--front", front_path, "front CSV")->required();
  metrics->add_option("--ref", ref_text, "reference point, e.g. 0,0")
      ->required();
  metrics->add_option("--truth", truth_path, "true front CSV");
  metrics->add_option("--utilities", utilities, "sampled utility count");
  metrics->add_option("--seed", seed, "utility sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<std::filesystem::path> truth;
    if (!truth_path.empty()) truth = truth_path;

    if (run->parsed()) {
      modec::RunConfig cfg = modec::load_run_config(config_path);
      if (!oracle_override.empty()) {
        modec::apply_oracle_spec(cfg, oracle_override);
      }
      return modec::cmd_run(cfg);
    }
    if (verify->parsed()) {
      return modec::cmd_verify(modec::load_run_config(config_path), truth);
    }
    return modec::cmd_metrics(front_path, parse_point(ref_text), truth,
                              utilities, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return modec::kExitError;
  }
}
