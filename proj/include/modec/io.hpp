/**
 * @file io.hpp
 * @brief Run configuration and on-disk formats: instance files, front CSVs,
 *        and the iteration log (one JSON object per line).
 */

#ifndef MODEC_IO_HPP
#define MODEC_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modec/engine.hpp"
#include "modec/momdp.hpp"

namespace modec {

enum class EnvironmentKind { Dst, MomdpFile, VectorsFile };
enum class OracleKind { ExactWeak, ExactApprox, Noisy, External };
enum class EngineVariant { General, TwoDim };

/// Parsed experiment configuration. Loaded from a JSON document whose keys
/// are checked strictly; unknown keys are rejected.
struct RunConfig {
  EnvironmentKind environment = EnvironmentKind::Dst;
  std::string environment_path;  ///< for momdp:/vectors: environments
  OracleKind oracle = OracleKind::ExactApprox;
  double noise_probability = 0.0;  ///< for noisy:<p>
  std::string external_command;    ///< for external:<command>
  double tolerance = 0.0;
  double rho = 0.01;
  SelectionStrategy strategy;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> budget;  ///< defaults to the worst case when
                                       ///< tolerance > 0; required otherwise
  std::string output_dir;
  EngineVariant variant = EngineVariant::General;
  bool allow_zero_tolerance = false;  ///< lets exact-approx run at tolerance 0
};

RunConfig load_run_config(const std::filesystem::path& path);

/// Parses an oracle spec ("exact-weak", "exact-approx", "noisy:<p>",
/// "external:<command>") into the config, validating its parameters.
void apply_oracle_spec(RunConfig& config, const std::string& spec);

/// Resolves the effective output directory, honouring the
/// MODEC_OUTPUT_DIR environment override.
std::filesystem::path resolve_output_dir(const RunConfig& config);

/**
 * @brief Loads a tabular MOMDP from its JSON document.
 *
 * Fields: states, actions, objectives, gamma, horizon, mu, terminals,
 * transitions (sparse entries {s,a,sp,p}), rewards (sparse entries
 * {s,a,sp,r}). Unlisted transitions are zero; unlisted rewards are zero
 * vectors. The result is validated and structural violations raise errors.
 */
TabularMomdp load_momdp(const std::filesystem::path& path);

/// Loads an explicit vector-set instance: {"points": [[...], ...]}.
std::vector<ValueVec> load_vector_set(const std::filesystem::path& path);

/// Derives init points from an explicit set: entry j of max_points is a
/// nondominated point attaining the objective-j maximum, min_points are
/// per-objective minimisers.
InitPoints vector_set_init_points(const std::vector<ValueVec>& points);

/// Front CSV: header o1..od,solution_id, one row per point, doubles written
/// round-trip exact.
void write_front_csv(const std::filesystem::path& path,
                     const std::vector<FrontPoint>& front);
std::vector<FrontPoint> read_front_csv(const std::filesystem::path& path);

/// One iteration of a run, as logged.
struct LogLine {
  std::int64_t t = 0;
  ValueVec referent;
  bool success = false;
  std::optional<ValueVec> value;
  double error_bound = 0.0;
  std::int64_t front_size = 0;
  std::int64_t lower_size = 0;
  std::int64_t upper_size = 0;
};

/// Serialises one log line; field names and order are part of the format:
/// t, referent, success, value, error_bound, front_size, lower_size,
/// upper_size.
std::string log_line_json(const LogLine& line);

std::vector<LogLine> read_log(const std::filesystem::path& path);

}  // namespace modec

#endif  // MODEC_IO_HPP
