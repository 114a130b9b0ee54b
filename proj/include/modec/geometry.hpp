/**
 * @file geometry.hpp
 * @brief Pareto dominance relations, antichain pruning, distances and box
 *        arithmetic over points in objective space.
 *
 * Conventions: all objectives are maximised. A vector v weakly dominates w
 * (v ⪰ w) when v_j >= w_j for every component; it Pareto dominates w (v ≻ w)
 * when additionally v != w; it strictly dominates w (v > w) when v_j > w_j
 * for every component. Comparisons are exact: no epsilon is applied, so set
 * membership stays consistent across the library. Tolerances live only in
 * the search engine's stopping rule.
 */

#ifndef MODEC_GEOMETRY_HPP
#define MODEC_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace modec {

/// A point in d-dimensional objective space (d >= 2), all components finite.
using ValueVec = std::vector<double>;

/// The six mutually exclusive outcomes of comparing an ordered pair (v, w).
enum class DominanceRelation {
  StrictlyDominates,    ///< v_j > w_j for all j
  ParetoDominates,      ///< v ⪰ w and v != w, but not strict
  Equal,                ///< v == w
  ParetoDominatedBy,    ///< mirror of ParetoDominates
  StrictlyDominatedBy,  ///< mirror of StrictlyDominates
  Incomparable,         ///< neither weakly dominates the other
};

/**
 * @brief Axis-aligned box spanned by a nadir and an ideal point.
 *
 * The ideal must strictly dominate the nadir in every component.
 */
struct BoundingBox {
  ValueVec nadir;
  ValueVec ideal;

  BoundingBox(ValueVec nadir, ValueVec ideal);

  [[nodiscard]] std::size_t dimensions() const { return nadir.size(); }
};

/// v ⪰ w: at least as good in every component.
bool weakly_dominates(const ValueVec& v, const ValueVec& w);

/// v ≻ w: weakly dominates and differs somewhere.
bool pareto_dominates(const ValueVec& v, const ValueVec& w);

/// v > w: strictly better in every component.
bool strictly_dominates(const ValueVec& v, const ValueVec& w);

/**
 * @brief Classifies the ordered pair (v, w) into its unique dominance
 *        relation.
 *
 * Throws std::invalid_argument on dimension mismatch.
 */
DominanceRelation compare(const ValueVec& v, const ValueVec& w);

/**
 * @brief Returns the Pareto non-dominated subset of @p points.
 *
 * Duplicates collapse to their first occurrence; the output preserves
 * first-seen order and is an antichain under ⪰. Throws on empty input or
 * non-uniform dimensions.
 */
std::vector<ValueVec> pprune(const std::vector<ValueVec>& points);

/// L-infinity distance max_j |v_j - w_j|. Throws on dimension mismatch.
double linf_dist(const ValueVec& v, const ValueVec& w);

/// True iff nadir_j <= v_j <= ideal_j for all j (closed box).
bool box_contains(const BoundingBox& b, const ValueVec& v);

/// Lexicographic order on components; the library-wide deterministic
/// tie-break.
bool lex_less(const ValueVec& a, const ValueVec& b);

/// Componentwise negation; maps lower-bound arithmetic onto upper-bound
/// arithmetic and back.
ValueVec negate(const ValueVec& v);

/// Throws std::invalid_argument unless v and w have the same dimension.
void require_same_dimension(const ValueVec& v, const ValueVec& w);

/// Throws std::invalid_argument unless v has dimension >= 2 and only finite
/// components.
void require_valid_point(const ValueVec& v);

}  // namespace modec

#endif  // MODEC_GEOMETRY_HPP
