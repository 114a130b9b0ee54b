/**
 * @file engine.hpp
 * @brief Anytime decomposition engine for Pareto front construction.
 *
 * The engine keeps a bounding box on the undiscovered front, a growing list
 * of discovered values V, a completed set C of referents proven empty, and
 * two antichains of box corners: lower bounds L (inner corners of the
 * region dominated by V — every remaining solution strictly dominates some
 * l in L) and upper bounds U (inner corners of the region excluded as
 * infeasible — every remaining solution is weakly dominated by some u in U).
 * Each iteration selects a referent from L, queries a Pareto oracle, and
 * carves the corners accordingly. The quantity max_u min_v ||u - v||_inf is
 * a certified, non-increasing upper bound on the distance from V to any
 * undiscovered solution; the loop stops once it reaches the tolerance.
 *
 * A backtracking replay repairs the state when an imperfect oracle is later
 * contradicted (a new value strictly dominating a recorded result).
 */

#ifndef MODEC_ENGINE_HPP
#define MODEC_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "modec/geometry.hpp"
#include "modec/oracle.hpp"

namespace modec {

/// The instance admits at most one nondominated initial point, so there is
/// nothing left to search.
class DegenerateFrontError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An oracle response strictly dominates an already-recorded result.
class ContradictionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SelectionKind {
  HypervolumeImprovement,  ///< greedy on the best dominating-box volume
  UniformRandom,
  EpsilonMixed,  ///< random with probability p, else greedy
};

struct SelectionStrategy {
  SelectionKind kind = SelectionKind::HypervolumeImprovement;
  double mix_probability = 0.0;  ///< p for EpsilonMixed, in [0, 1]
};

/// A discovered value with the oracle's solution handle (-1 when absent).
struct FrontPoint {
  ValueVec value;
  std::int64_t solution = -1;
};

struct IterationRecord {
  std::int64_t t = 0;
  ValueVec referent;
  OracleResponse response;
  double error_bound_after = 0.0;
};

struct SearchState {
  BoundingBox box;
  double tolerance = 0.0;
  std::vector<FrontPoint> front;     ///< V, grows monotonically
  std::vector<ValueVec> completed;   ///< C
  std::vector<ValueVec> lower;       ///< L, lexicographically sorted antichain
  std::vector<ValueVec> upper;       ///< U, lexicographically sorted antichain
  std::vector<IterationRecord> history;
};

enum class Termination {
  Converged,        ///< error bound fell to the tolerance
  Exhausted,        ///< no upper bounds remain; the box is fully resolved
  BudgetExhausted,  ///< iteration cap hit first
};

/// Emitted once per replay of the history after a contradiction.
struct ReplayEvent {
  std::int64_t at_step = 0;        ///< external step that triggered the replay
  std::int64_t offending_step = 0; ///< earliest contradicted history record
  ValueVec new_value;
  std::vector<ValueVec> dropped_values;      ///< contradicted front values
  std::vector<ValueVec> reopened_referents;  ///< contradicted completed refs
};

struct StepInfo {
  std::int64_t t = 0;
  ValueVec referent;
  OracleResponse response;
  double error_bound = 0.0;
  std::size_t front_size = 0;
  std::size_t lower_size = 0;
  std::size_t upper_size = 0;
  bool replay_triggered = false;
};

using StepObserver = std::function<void(const StepInfo&, const SearchState&)>;

struct FrontResult {
  std::vector<FrontPoint> front;  ///< nondominated subset of the raw front
  double error_bound = 0.0;
  Termination termination = Termination::Converged;
  std::int64_t iterations = 0;
  std::vector<IterationRecord> history;
  std::vector<ReplayEvent> replays;
};

/**
 * @brief Lower-bound update: every l strictly dominated by @p vstar is
 *        replaced by its d one-component substitutions (l with component j
 *        raised to vstar_j); the result is pruned to the minimal antichain
 *        and returned lexicographically sorted.
 */
std::vector<ValueVec> update_lower(const ValueVec& vstar,
                                   const std::vector<ValueVec>& lower);

/// Mirror of update_lower under negation: strictly dominating u are clipped
/// and the maximal antichain is kept.
std::vector<ValueVec> update_upper(const ValueVec& vstar,
                                   const std::vector<ValueVec>& upper);

/**
 * @brief Certified error bound: the largest, over upper corners u, of the
 *        smallest additive shift that makes some front value weakly
 *        dominate u; 0 once U is empty.
 *
 * Every undiscovered solution is weakly dominated by some corner, and the
 * shift is monotone under domination, so this dominates the shift needed to
 * cover any undiscovered solution and never increases as the search
 * progresses. For corners strictly dominating their nearest front value the
 * shift equals the plain L-inf distance. Throws std::logic_error on an
 * empty front.
 */
double error_upper_bound(const SearchState& s);

/**
 * @brief Iteration budget sufficient for convergence at tolerance
 *        @p tau > 0: with k_j = ceil((ideal_j - nadir_j) / tau), returns
 *        prod k_j - prod (k_j - 1), saturated at int64 max.
 */
std::int64_t worst_case_iterations(const BoundingBox& box, double tau);

/**
 * @brief Builds the initial search state.
 *
 * @p max_points must hold one maximal point per objective (entry j maximal
 * in objective j); the ideal is their componentwise maximum. The nadir is
 * the componentwise minimum of @p min_points lowered by a strictness offset
 * of 1e-6 * max(1, span) per axis, making it a strict lower bound. The
 * initial front is pprune(max_points) and must keep more than one point, or
 * DegenerateFrontError is thrown. L starts at {nadir} and is carved once
 * per maximal point; U starts at {ideal}.
 */
SearchState init_search(const std::vector<ValueVec>& max_points,
                        const std::vector<ValueVec>& min_points,
                        double tolerance);

/// True iff @p value strictly dominates a recorded front value or completed
/// referent — the signal that some earlier oracle answer was wrong.
bool contradicts(const SearchState& s, const ValueVec& value);

/**
 * @brief Applies a successful oracle response at @p referent: appends the
 *        value to the front and carves both corner sets.
 *
 * Throws ContradictionError when the value strictly dominates a recorded
 * result (callers wanting repair should route through Engine::step, which
 * replays instead of throwing).
 */
void apply_success(SearchState& s, const ValueVec& referent,
                   const OracleResponse& response);

/// Applies a failed query: moves @p referent from L to C and clips every
/// upper bound strictly dominating it. Throws when the referent is not a
/// current lower bound.
void apply_failure(SearchState& s, const ValueVec& referent);

/// Referent choice per the strategy; HypervolumeImprovement scores each l by
/// the largest box volume to a strictly dominating u, ties going to the
/// lexicographically smallest l. Throws std::logic_error on empty L.
ValueVec select_referent(const SearchState& s, const SelectionStrategy& strategy,
                         std::mt19937_64& rng);

/**
 * @brief Orchestrates a full search: referent selection, oracle dispatch,
 *        contradiction replay, stopping.
 *
 * Deterministic given (construction arguments, seed, oracle).
 */
class Engine {
 public:
  Engine(const std::vector<ValueVec>& max_points,
         const std::vector<ValueVec>& min_points, double tolerance,
         SelectionStrategy strategy = {}, std::uint64_t seed = 0);

  [[nodiscard]] const SearchState& state() const { return state_; }
  [[nodiscard]] double error_bound() const { return error_upper_bound(state_); }

  /// True once the error bound has reached the tolerance (or U is empty).
  [[nodiscard]] bool finished() const;

  ValueVec select_referent();

  /// One iteration: select, query, apply (or replay on contradiction).
  /// Throws std::logic_error once finished.
  IterationRecord step(ParetoOracle& oracle);

  /// Loops step() until convergence, exhaustion, or @p budget iterations.
  FrontResult run(ParetoOracle& oracle, std::int64_t budget,
                  const StepObserver& observer = {});

  /// The nondominated subset of the raw front, first-seen order.
  [[nodiscard]] std::vector<FrontPoint> pareto_front() const;

  [[nodiscard]] const std::vector<ReplayEvent>& replays() const {
    return replays_;
  }

 private:
  SearchState state_;
  SearchState initial_;  ///< pristine copy for replays
  SelectionStrategy strategy_;
  std::mt19937_64 rng_;
  std::vector<ReplayEvent> replays_;
  std::int64_t steps_taken_ = 0;
  bool last_step_replayed_ = false;

  void replay_correction(const OracleResponse& response);
};

/// Nondominated subset of a raw front, keeping handles, first-seen order.
std::vector<FrontPoint> prune_front(const std::vector<FrontPoint>& front);

struct StepInfo2d {
  std::int64_t t = 0;
  ValueVec referent;
  OracleResponse response;
  double gap_error = 0.0;  ///< largest corner-to-corner gap left
  std::size_t rectangle_count = 0;
  double rectangle_area_sum = 0.0;
  std::size_t front_size = 0;
};

using StepObserver2d = std::function<void(const StepInfo2d&)>;

/**
 * @brief Bi-objective specialisation: maintains disjoint rectangles between
 *        adjacent discoveries, processes the largest-area rectangle first,
 *        and stops when the largest corner-to-corner gap reaches the
 *        tolerance. Each success splits one rectangle into at most two.
 *
 * @p initial must be a fresh state from init_search with d = 2. At
 * tolerance 0 the iteration sequence matches Engine::run exactly.
 */
FrontResult run_2d(const SearchState& initial, SelectionStrategy strategy,
                   std::uint64_t seed, ParetoOracle& oracle,
                   std::int64_t budget, const StepObserver2d& observer = {});

}  // namespace modec

#endif  // MODEC_ENGINE_HPP
