/**
 * @file oracle.hpp
 * @brief Pareto-oracle contract and concrete oracles: augmented Chebyshev
 *        scalarisation, exact oracles over explicit sets and over enumerated
 *        tabular-MOMDP policies, a fault-injecting wrapper, and an
 *        out-of-process oracle speaking newline-delimited JSON.
 *
 * A Pareto oracle maps a referent r to a solution whose value lies strictly
 * inside the target region above r, or reports that none exists. A weak
 * oracle (tolerance 0, plain Chebyshev) returns weakly Pareto optimal
 * values; an approximate oracle (augmented Chebyshev) returns Pareto
 * optimal values at least r + tau in every component.
 */

#ifndef MODEC_ORACLE_HPP
#define MODEC_ORACLE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modec/geometry.hpp"
#include "modec/momdp.hpp"

namespace modec {

struct OracleQuery {
  ValueVec referent;
  double tolerance = 0.0;
};

struct OracleResponse {
  bool success = false;
  std::optional<ValueVec> value;          ///< present iff success
  std::optional<std::int64_t> solution;   ///< opaque handle, oracle-defined
  bool exact = true;                      ///< trusted result vs heuristic
};

/// Weights and augmentation strength of the augmented Chebyshev
/// scalarisation. All weights must be positive, rho >= 0.
struct AsfParams {
  ValueVec lambda;
  double rho = 0.0;
};

/**
 * @brief Augmented Chebyshev achievement scalarising function:
 *        min_j lambda_j (v_j - r_j) + rho * sum_j lambda_j (v_j - r_j).
 *
 * With rho = 0 it is order representing (non-negative exactly on the region
 * weakly dominating r, strictly increasing); with rho > 0 it is order
 * approximating (strongly increasing).
 */
double asf_chebyshev(const ValueVec& v, const ValueVec& r,
                     const AsfParams& params);

/// The standard normalisation lambda_j = 1 / (ideal_j - nadir_j), which puts
/// all objectives on the scale of the box.
ValueVec default_lambda(const BoundingBox& box);

enum class OracleMode {
  Weak,         ///< rho = 0; returns weakly Pareto optimal values
  Approximate,  ///< rho > 0; returns Pareto optimal values >= r + tau
};

/**
 * @brief One exact oracle evaluation over an explicit finite feasible set.
 *
 * Weak mode maximises the plain Chebyshev score over the whole set and
 * succeeds iff the maximiser strictly dominates the referent. Approximate
 * mode maximises the augmented score over the target region itself
 * ({v >= r + tau} when tau > 0, {v > r} when tau = 0), so a failure proves
 * the region empty; the returned value is Pareto optimal within the set.
 * Ties are broken lexicographically (largest wins).
 */
OracleResponse set_oracle_query(const std::vector<ValueVec>& feasible,
                                const OracleQuery& q, const AsfParams& params,
                                OracleMode mode);

/// Interface queried by the search engine. Implementations must be
/// deterministic functions of the query (and their construction seed).
class ParetoOracle {
 public:
  virtual ~ParetoOracle() = default;
  virtual OracleResponse query(const OracleQuery& q) = 0;
};

/// Exact oracle over an explicit set of value vectors. Solution handles are
/// indices into the set.
class SetOracle : public ParetoOracle {
 public:
  SetOracle(std::vector<ValueVec> feasible, AsfParams params, OracleMode mode);

  OracleResponse query(const OracleQuery& q) override;

  [[nodiscard]] const std::vector<ValueVec>& feasible() const {
    return feasible_;
  }
  [[nodiscard]] const AsfParams& params() const { return params_; }
  [[nodiscard]] OracleMode mode() const { return mode_; }

 private:
  std::vector<ValueVec> feasible_;
  AsfParams params_;
  OracleMode mode_;
};

/**
 * @brief Exact oracle over the achievable deterministic-policy returns of a
 *        tabular MOMDP.
 *
 * The nondominated return set is enumerated once up front; solution handles
 * resolve to concrete policy tables.
 */
class PolicyEnumOracle : public ParetoOracle {
 public:
  PolicyEnumOracle(const TabularMomdp& momdp, AsfParams params,
                   OracleMode mode,
                   std::size_t cap = kDefaultEnumerationCap);

  OracleResponse query(const OracleQuery& q) override;

  [[nodiscard]] const std::vector<ValueVec>& values() const { return values_; }
  [[nodiscard]] const PolicyTable& policy(std::int64_t handle) const;

 private:
  std::vector<ValueVec> values_;
  std::vector<PolicyTable> policies_;
  AsfParams params_;
  OracleMode mode_;
};

/**
 * @brief Fault-injecting wrapper around an exact oracle.
 *
 * With probability p_fault, a successful inner query is replaced by a
 * feasible point that still strictly dominates the referent but is not
 * Pareto optimal (the highest-scoring such candidate), when one exists.
 * Fault decisions are a pure function of (seed, query index). When
 * p_fault > 0 every response is flagged exact = false; with p_fault = 0 the
 * wrapper is a strict pass-through.
 */
class NoisyOracle : public ParetoOracle {
 public:
  NoisyOracle(std::shared_ptr<ParetoOracle> inner,
              std::vector<ValueVec> feasible, AsfParams params,
              double p_fault, std::uint64_t seed);

  OracleResponse query(const OracleQuery& q) override;

 private:
  std::shared_ptr<ParetoOracle> inner_;
  std::vector<ValueVec> feasible_;
  std::vector<bool> pareto_optimal_;
  AsfParams params_;
  double p_fault_;
  std::uint64_t seed_;
  std::uint64_t query_index_ = 0;
};

/**
 * @brief Oracle running as a child process, one JSON object per line on
 *        stdio.
 *
 * Request:  {"referent":[...],"tolerance":x}
 * Response: {"success":bool,"value":[...],"exact":bool}
 *
 * "value" may be null or absent when success is false; "exact" defaults to
 * true when absent.
 */
class ExternalOracle : public ParetoOracle {
 public:
  explicit ExternalOracle(const std::string& command);
  ~ExternalOracle() override;

  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  OracleResponse query(const OracleQuery& q) override;

 private:
  int child_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;

  std::string read_line();
};

}  // namespace modec

#endif  // MODEC_ORACLE_HPP
