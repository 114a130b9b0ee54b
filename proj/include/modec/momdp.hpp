/**
 * @file momdp.hpp
 * @brief Tabular multi-objective MDPs: validation, single-objective
 *        finite-horizon solvers, exact enumeration of deterministic-policy
 *        return sets, and the Deep Sea Treasure benchmark instance.
 *
 * Policies are deterministic and time-indexed: an action per (state, step)
 * cell. For deterministic-transition instances this subsumes conditioning on
 * the accrued reward, since the accrued reward is a function of the
 * trajectory, which is a function of time under determinism.
 */

#ifndef MODEC_MOMDP_HPP
#define MODEC_MOMDP_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "modec/geometry.hpp"

namespace modec {

/**
 * @brief Finite-state, finite-action MDP with vector-valued rewards.
 *
 * Transition probabilities and rewards are stored densely, indexed by
 * (s, a, s'). Terminal states absorb: once entered, the episode stops
 * accruing reward regardless of the stored dynamics.
 */
struct TabularMomdp {
  int num_states = 0;
  int num_actions = 0;
  int num_objectives = 0;
  std::vector<double> transitions;   ///< P(s'|s,a), index (s*A + a)*S + s'
  std::vector<ValueVec> rewards;     ///< R(s,a,s'), same indexing
  std::vector<double> initial_dist;  ///< distribution over start states
  double gamma = 1.0;                ///< discount, in (0, 1]
  int horizon = 1;                   ///< episode length, >= 1
  std::unordered_set<int> terminal_states;

  [[nodiscard]] std::size_t index(int s, int a, int sp) const {
    return (static_cast<std::size_t>(s) * num_actions + a) * num_states + sp;
  }
  [[nodiscard]] double prob(int s, int a, int sp) const {
    return transitions[index(s, a, sp)];
  }
  [[nodiscard]] const ValueVec& reward(int s, int a, int sp) const {
    return rewards[index(s, a, sp)];
  }
  [[nodiscard]] bool is_terminal(int s) const {
    return terminal_states.count(s) > 0;
  }
};

/// Deterministic nonstationary policy: one action per (state, step) cell.
struct PolicyTable {
  int num_states = 0;
  int horizon = 0;
  std::vector<int> actions;  ///< index t*num_states + s

  PolicyTable() = default;
  PolicyTable(int states, int steps)
      : num_states(states), horizon(steps),
        actions(static_cast<std::size_t>(states) * steps, 0) {}

  [[nodiscard]] int action(int s, int t) const {
    return actions[static_cast<std::size_t>(t) * num_states + s];
  }
  void set_action(int s, int t, int a) {
    actions[static_cast<std::size_t>(t) * num_states + s] = a;
  }
};

/// Discounted reward accumulated so far along a trajectory,
/// R_t = sum_{k<t} gamma^k r_k, with R_0 = 0.
struct AccruedReward {
  ValueVec value;

  static AccruedReward zero(int objectives) {
    return AccruedReward{ValueVec(objectives, 0.0)};
  }
  /// Adds gamma^t-weighted step reward.
  void add(double discount_pow, const ValueVec& reward) {
    for (std::size_t j = 0; j < value.size(); ++j) {
      value[j] += discount_pow * reward[j];
    }
  }
};

/// Checks every structural invariant and returns one message per violation;
/// an empty list means the instance is well-formed.
std::vector<std::string> validate(const TabularMomdp& m);

enum class Sense { Maximize, Minimize };

struct ScalarSolution {
  double value = 0.0;
  PolicyTable policy;
};

/**
 * @brief Optimises a single objective by finite-horizon backward induction.
 *
 * Returns the optimal expected value of objective @p objective from the
 * initial distribution together with an optimal deterministic nonstationary
 * policy. Minimisation runs the same recursion on negated rewards.
 */
ScalarSolution scalar_value_iteration(const TabularMomdp& m, int objective,
                                      Sense sense);

/// Exact expected discounted vector return of @p policy from the initial
/// distribution (backward policy evaluation).
ValueVec policy_return(const TabularMomdp& m, const PolicyTable& policy);

/// Samples one episode under @p policy and returns the realised discounted
/// return, tracked as an accrued reward.
ValueVec rollout(const TabularMomdp& m, const PolicyTable& policy,
                 std::mt19937_64& rng);

struct ReturnSetEntry {
  ValueVec value;
  PolicyTable policy;
};

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

/**
 * @brief Exact Pareto-nondominated set of achievable returns over
 *        deterministic time-indexed policies, each with a witness policy.
 *
 * Instances with deterministic transitions and a point-mass initial
 * distribution are solved by nondominated backward induction with pruning at
 * every (state, step) cell. Anything else falls back to explicit policy
 * enumeration, rejected with CapacityError when |A|^(|S|*H) exceeds @p cap.
 */
std::vector<ReturnSetEntry> enumerate_returns(
    const TabularMomdp& m, std::size_t cap = kDefaultEnumerationCap);

/// The exhaustive fallback as a standalone routine; independent of the
/// backward-induction path and usable as a cross-check on small instances.
std::vector<ReturnSetEntry> enumerate_returns_exhaustive(
    const TabularMomdp& m, std::size_t cap = kDefaultEnumerationCap);

/// Enumeration would exceed its policy-count cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief The canonical 10-treasure Deep Sea Treasure grid.
 *
 * 11x10 grid, four moves, treasures {1,2,3,5,8,16,24,50,74,124} on the
 * seabed, -1 time reward per step, episode ends on treasure or after 50
 * steps, gamma = 1, start fixed at the top-left cell.
 */
TabularMomdp dst_env();

/// Maximal/minimal points used to initialise a search on an environment.
struct InitPoints {
  std::vector<ValueVec> max_points;
  std::vector<ValueVec> min_points;
};

/// The standard Deep Sea Treasure initialisation: maximal points
/// (124,-50) and (1,-1), minimal point (0,-50).
InitPoints dst_init_points();

/// Derives init points from per-objective scalar solves: entry j of
/// max_points is the vector return of a policy maximising objective j
/// (minimising for min_points).
InitPoints momdp_init_points(const TabularMomdp& m);

}  // namespace modec

#endif  // MODEC_MOMDP_HPP
