/**
 * @file commands.hpp
 * @brief The run / verify / metrics commands behind the CLI, returning
 *        process exit codes.
 *
 * Exit codes: 0 success (run converged or exhausted the space, or every
 * audit passed), 1 configuration/IO error, 2 run stopped on its iteration
 * budget, 3 verification audit failure.
 */

#ifndef MODEC_COMMANDS_HPP
#define MODEC_COMMANDS_HPP

#include <filesystem>
#include <optional>

#include "modec/io.hpp"

namespace modec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitAuditFailed = 3;

/// Runs a search per the config; writes run.jsonl, front.csv and
/// summary.json into the output directory.
int cmd_run(const RunConfig& config);

/**
 * @brief Audits a finished run: replays the logged responses through the
 *        engine, checks referent and error-bound consistency line by line,
 *        verifies that every logged bound dominates the brute-force
 *        approximation error against the truth, and reports final
 *        epsilon/utility-loss metrics.
 *
 * Truth defaults to the nondominated set of the config's environment when
 * no truth file is given.
 */
int cmd_verify(const RunConfig& config,
               const std::optional<std::filesystem::path>& truth_file);

/// Prints hypervolume of the front at @p ref, plus epsilon error and
/// maximum utility loss when a truth front is supplied.
int cmd_metrics(const std::filesystem::path& front_file, const ValueVec& ref,
                const std::optional<std::filesystem::path>& truth_file,
                int utility_count, std::uint64_t seed);

}  // namespace modec

#endif  // MODEC_COMMANDS_HPP
