/**
 * @file metrics.hpp
 * @brief Front-quality metrics: exact hypervolume, maximum utility loss over
 *        sampled monotone utilities, and the L-inf approximation error.
 */

#ifndef MODEC_METRICS_HPP
#define MODEC_METRICS_HPP

#include <cstdint>
#include <vector>

#include "modec/geometry.hpp"

namespace modec {

/**
 * @brief Exact Lebesgue volume of the union of boxes [ref, v] over the
 *        front, by recursive dimension sweep.
 *
 * Points not weakly dominating @p ref contribute nothing and are dropped.
 * Empty fronts yield 0. Supports up to 6 objectives.
 */
double hypervolume(const std::vector<ValueVec>& front, const ValueVec& ref);

/**
 * @brief Piecewise-linear monotone utility over a bounding box.
 *
 * Each axis carries six cells with non-negative gradients; the raw utility
 * of v is the sum over axes of the cumulative gradient mass below v_j, and
 * the result is rescaled so u(nadir) = 0 and u(ideal) = 1. Evaluation clamps
 * to the box.
 */
class UtilityFn {
 public:
  static constexpr int kCellsPerAxis = 6;

  UtilityFn(BoundingBox box, std::vector<std::vector<double>> gradients);

  double operator()(const ValueVec& v) const;

  [[nodiscard]] const BoundingBox& box() const { return box_; }
  [[nodiscard]] const std::vector<std::vector<double>>& gradients() const {
    return gradients_;
  }

 private:
  BoundingBox box_;
  std::vector<std::vector<double>> gradients_;  ///< [axis][cell], >= 0
  double scale_ = 1.0;                          ///< 1 / raw(ideal)

  [[nodiscard]] double raw(const ValueVec& v) const;
};

/// Samples @p count utilities with per-cell gradients uniform in [0, 5),
/// deterministic in @p seed.
std::vector<UtilityFn> generate_utilities(const BoundingBox& box, int count,
                                          std::uint64_t seed);

/// Worst gap, over the utilities, between the best achievable utility on the
/// true front and on the approximation.
double max_utility_loss(const std::vector<ValueVec>& approx,
                        const std::vector<ValueVec>& true_front,
                        const std::vector<UtilityFn>& utilities);

/// max over the true front of the L-inf distance to the nearest
/// approximation point.
double epsilon_error(const std::vector<ValueVec>& approx,
                     const std::vector<ValueVec>& true_front);

/**
 * @brief The smallest additive shift of the approximation that weakly
 *        dominates every true-front point, i.e. max over the truth of
 *        min over the approximation of max_j (t_j - a_j)_+.
 *
 * This is the quantity the search engine's certified bound dominates at
 * every iteration; it coincides with epsilon_error whenever each true point
 * is matched by an approximation point it weakly dominates (in particular
 * both are 0 exactly when the truth is covered point-for-point).
 */
double shift_error(const std::vector<ValueVec>& approx,
                   const std::vector<ValueVec>& true_front);

}  // namespace modec

#endif  // MODEC_METRICS_HPP
