// Serves the line-based oracle protocol over stdio from an explicit
// vector-set file: one JSON request per line ({"referent":[...],
// "tolerance":x}), one JSON response per line ({"success":...,"value":...,
// "exact":...}). Reference implementation for out-of-process oracles.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "modec/io.hpp"
#include "modec/oracle.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stdio Pareto oracle over an explicit vector set"};
  std::string set_path;
  std::string mode_text = "approx";
  double rho = 0.01;
  app.add_option("--set", set_path, "vector-set file (JSON)")->required();
  app.add_option("--mode", mode_text, "weak or approx")
      ->check(CLI::IsMember({"weak", "approx"}));
  app.add_option("--rho", rho, "augmentation strength (approx mode)");
  CLI11_PARSE(app, argc, argv);

  try {
    auto points = modec::load_vector_set(set_path);
    auto init = modec::vector_set_init_points(points);
    auto state = modec::init_search(init.max_points, init.min_points, 0.0);

    modec::OracleMode mode = mode_text == "weak"
                                 ? modec::OracleMode::Weak
                                 : modec::OracleMode::Approximate;
    modec::AsfParams params{modec::default_lambda(state.box),
                            mode == modec::OracleMode::Weak ? 0.0 : rho};
    modec::SetOracle oracle(points, params, mode);

    std::string line;
    while (std::getline(std::cin, line)) {
      if (line.empty()) continue;
      nlohmann::json request = nlohmann::json::parse(line);
      modec::OracleQuery query;
      query.referent = request.at("referent").get<modec::ValueVec>();
      query.tolerance = request.value("tolerance", 0.0);

      modec::OracleResponse response = oracle.query(query);
      nlohmann::ordered_json reply;
      reply["success"] = response.success;
      if (response.value) {
        reply["value"] = *response.value;
      } else {
        reply["value"] = nullptr;
      }
      reply["exact"] = response.exact;
      std::cout << reply.dump() << "\n" << std::flush;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
