#include "modec/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace modec {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return json::parse(in);
}

void reject_unknown_keys(const json& doc,
                         const std::vector<std::string>& known,
                         const std::string& what) {
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw std::runtime_error("unknown key '" + item.key() + "' in " + what);
    }
  }
}

/// Splits "prefix:rest"; returns true when @p value starts with the prefix.
bool split_spec(const std::string& value, const std::string& prefix,
                std::string& rest) {
  if (value.rfind(prefix + ":", 0) != 0) return false;
  rest = value.substr(prefix.size() + 1);
  return true;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  json doc = parse_file(path);
  if (!doc.is_object()) {
    throw std::runtime_error("config must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"environment", "oracle", "tolerance", "rho", "strategy",
                       "seed", "budget", "output_dir", "variant",
                       "allow_zero_tolerance"},
                      "config");

  RunConfig cfg;

  std::string env = doc.at("environment").get<std::string>();
  std::string rest;
  if (env == "dst") {
    cfg.environment = EnvironmentKind::Dst;
  } else if (split_spec(env, "momdp", rest)) {
    cfg.environment = EnvironmentKind::MomdpFile;
    cfg.environment_path = rest;
  } else if (split_spec(env, "vectors", rest)) {
    cfg.environment = EnvironmentKind::VectorsFile;
    cfg.environment_path = rest;
  } else {
    throw std::runtime_error("unknown environment '" + env + "'");
  }

  apply_oracle_spec(cfg, doc.at("oracle").get<std::string>());

  cfg.tolerance = doc.at("tolerance").get<double>();
  if (!(cfg.tolerance >= 0.0)) {
    throw std::runtime_error("tolerance must be >= 0");
  }
  cfg.rho = doc.value("rho", 0.01);
  if (!(cfg.rho >= 0.0)) {
    throw std::runtime_error("rho must be >= 0");
  }
  cfg.allow_zero_tolerance = doc.value("allow_zero_tolerance", false);
  if (cfg.oracle == OracleKind::ExactApprox && cfg.tolerance == 0.0 &&
      !cfg.allow_zero_tolerance) {
    throw std::runtime_error(
        "exact-approx needs tolerance > 0 (or allow_zero_tolerance)");
  }

  std::string strategy = doc.value("strategy", std::string("hypervolume"));
  if (strategy == "hypervolume") {
    cfg.strategy.kind = SelectionKind::HypervolumeImprovement;
  } else if (strategy == "random") {
    cfg.strategy.kind = SelectionKind::UniformRandom;
  } else if (split_spec(strategy, "mixed", rest)) {
    cfg.strategy.kind = SelectionKind::EpsilonMixed;
    cfg.strategy.mix_probability = std::stod(rest);
    if (!(cfg.strategy.mix_probability >= 0.0 &&
          cfg.strategy.mix_probability <= 1.0)) {
      throw std::runtime_error("mixed probability must lie in [0, 1]");
    }
  } else {
    throw std::runtime_error("unknown strategy '" + strategy + "'");
  }

  cfg.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("budget")) {
    cfg.budget = doc.at("budget").get<std::int64_t>();
    if (*cfg.budget < 1) {
      throw std::runtime_error("budget must be >= 1");
    }
  } else if (cfg.tolerance == 0.0) {
    throw std::runtime_error("tolerance 0 needs an explicit budget");
  }

  cfg.output_dir = doc.at("output_dir").get<std::string>();
  if (cfg.output_dir.empty()) {
    throw std::runtime_error("output_dir must not be empty");
  }

  std::string variant = doc.value("variant", std::string("general"));
  if (variant == "general") {
    cfg.variant = EngineVariant::General;
  } else if (variant == "2d") {
    cfg.variant = EngineVariant::TwoDim;
  } else {
    throw std::runtime_error("unknown variant '" + variant + "'");
  }

  return cfg;
}

void apply_oracle_spec(RunConfig& cfg, const std::string& spec) {
  std::string rest;
  if (spec == "exact-weak") {
    cfg.oracle = OracleKind::ExactWeak;
  } else if (spec == "exact-approx") {
    cfg.oracle = OracleKind::ExactApprox;
  } else if (split_spec(spec, "noisy", rest)) {
    cfg.oracle = OracleKind::Noisy;
    cfg.noise_probability = std::stod(rest);
    if (!(cfg.noise_probability >= 0.0 && cfg.noise_probability < 1.0)) {
      throw std::runtime_error("noise probability must lie in [0, 1)");
    }
  } else if (split_spec(spec, "external", rest)) {
    cfg.oracle = OracleKind::External;
    cfg.external_command = rest;
    if (cfg.external_command.empty()) {
      throw std::runtime_error("external oracle needs a command");
    }
  } else {
    throw std::runtime_error("unknown oracle '" + spec + "'");
  }
}

std::filesystem::path resolve_output_dir(const RunConfig& config) {
  if (const char* override_dir = std::getenv("MODEC_OUTPUT_DIR")) {
    if (*override_dir != '\0') return override_dir;
  }
  return config.output_dir;
}

TabularMomdp load_momdp(const std::filesystem::path& path) {
  json doc = parse_file(path);
  reject_unknown_keys(doc,
                      {"states", "actions", "objectives", "gamma", "horizon",
                       "mu", "terminals", "transitions", "rewards"},
                      "momdp file");

  TabularMomdp m;
  m.num_states = doc.at("states").get<int>();
  m.num_actions = doc.at("actions").get<int>();
  m.num_objectives = doc.at("objectives").get<int>();
  m.gamma = doc.at("gamma").get<double>();
  m.horizon = doc.at("horizon").get<int>();
  if (m.num_states < 1 || m.num_actions < 1 || m.num_objectives < 2) {
    throw std::runtime_error("momdp sizes out of range");
  }
  m.initial_dist = doc.at("mu").get<std::vector<double>>();
  for (int s : doc.value("terminals", std::vector<int>{})) {
    m.terminal_states.insert(s);
  }

  const std::size_t cells = static_cast<std::size_t>(m.num_states) *
                            m.num_actions * m.num_states;
  m.transitions.assign(cells, 0.0);
  m.rewards.assign(cells, ValueVec(m.num_objectives, 0.0));

  auto check_indices = [&](int s, int a, int sp) {
    if (s < 0 || s >= m.num_states || a < 0 || a >= m.num_actions || sp < 0 ||
        sp >= m.num_states) {
      throw std::runtime_error("momdp entry indices out of range");
    }
  };
  for (const auto& entry : doc.at("transitions")) {
    reject_unknown_keys(entry, {"s", "a", "sp", "p"}, "transition entry");
    int s = entry.at("s").get<int>();
    int a = entry.at("a").get<int>();
    int sp = entry.at("sp").get<int>();
    check_indices(s, a, sp);
    m.transitions[m.index(s, a, sp)] = entry.at("p").get<double>();
  }
  for (const auto& entry : doc.at("rewards")) {
    reject_unknown_keys(entry, {"s", "a", "sp", "r"}, "reward entry");
    int s = entry.at("s").get<int>();
    int a = entry.at("a").get<int>();
    int sp = entry.at("sp").get<int>();
    check_indices(s, a, sp);
    auto r = entry.at("r").get<ValueVec>();
    if (static_cast<int>(r.size()) != m.num_objectives) {
      throw std::runtime_error("momdp reward entry has wrong dimension");
    }
    m.rewards[m.index(s, a, sp)] = std::move(r);
  }

  auto violations = validate(m);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid momdp: " << violations.front();
    if (violations.size() > 1) {
      os << " (and " << violations.size() - 1 << " more)";
    }
    throw std::runtime_error(os.str());
  }
  return m;
}

std::vector<ValueVec> load_vector_set(const std::filesystem::path& path) {
  json doc = parse_file(path);
  reject_unknown_keys(doc, {"points"}, "vector-set file");
  auto points = doc.at("points").get<std::vector<ValueVec>>();
  if (points.empty()) {
    throw std::runtime_error("vector set is empty");
  }
  for (const auto& p : points) {
    require_valid_point(p);
    require_same_dimension(points.front(), p);
  }
  return points;
}

InitPoints vector_set_init_points(const std::vector<ValueVec>& points) {
  InitPoints init;
  const std::size_t d = points.front().size();
  for (std::size_t j = 0; j < d; ++j) {
    double column_max = points.front()[j];
    double column_min = points.front()[j];
    for (const auto& p : points) {
      column_max = std::max(column_max, p[j]);
      column_min = std::min(column_min, p[j]);
    }

    // Among the objective-j maximisers, prefer one that is nondominated in
    // the whole set (there is always one), lexicographically largest.
    const ValueVec* best = nullptr;
    for (const auto& p : points) {
      if (p[j] != column_max) continue;
      bool dominated = false;
      for (const auto& q : points) {
        if (pareto_dominates(q, p)) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      if (best == nullptr || lex_less(*best, p)) best = &p;
    }
    init.max_points.push_back(*best);

    const ValueVec* low = nullptr;
    for (const auto& p : points) {
      if (p[j] != column_min) continue;
      if (low == nullptr || lex_less(p, *low)) low = &p;
    }
    init.min_points.push_back(*low);
  }
  return init;
}

void write_front_csv(const std::filesystem::path& path,
                     const std::vector<FrontPoint>& front) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  std::size_t d = front.empty() ? 0 : front.front().value.size();
  for (std::size_t j = 0; j < d; ++j) {
    out << "o" << (j + 1) << ",";
  }
  out << "solution_id\n";
  for (const auto& fp : front) {
    for (double x : fp.value) out << format_double(x) << ",";
    out << fp.solution << "\n";
  }
}

std::vector<FrontPoint> read_front_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("front csv is empty");
  }
  std::vector<FrontPoint> front;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 3) {
      throw std::runtime_error("front csv row needs o1,o2,...,solution_id");
    }
    FrontPoint fp;
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      fp.value.push_back(std::stod(fields[j]));
    }
    fp.solution = std::stoll(fields.back());
    front.push_back(std::move(fp));
  }
  return front;
}

std::string log_line_json(const LogLine& line) {
  ordered_json obj;
  obj["t"] = line.t;
  obj["referent"] = line.referent;
  obj["success"] = line.success;
  if (line.value) {
    obj["value"] = *line.value;
  } else {
    obj["value"] = nullptr;
  }
  obj["error_bound"] = line.error_bound;
  obj["front_size"] = line.front_size;
  obj["lower_size"] = line.lower_size;
  obj["upper_size"] = line.upper_size;
  return obj.dump();
}

std::vector<LogLine> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<LogLine> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    json obj = json::parse(raw);
    LogLine line;
    line.t = obj.at("t").get<std::int64_t>();
    line.referent = obj.at("referent").get<ValueVec>();
    line.success = obj.at("success").get<bool>();
    if (!obj.at("value").is_null()) {
      line.value = obj.at("value").get<ValueVec>();
    }
    line.error_bound = obj.at("error_bound").get<double>();
    line.front_size = obj.at("front_size").get<std::int64_t>();
    line.lower_size = obj.at("lower_size").get<std::int64_t>();
    line.upper_size = obj.at("upper_size").get<std::int64_t>();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace modec
