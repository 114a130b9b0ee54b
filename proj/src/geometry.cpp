#include "modec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modec {

void require_same_dimension(const ValueVec& v, const ValueVec& w) {
  if (v.size() != w.size()) {
    throw std::invalid_argument("vectors have mismatched dimensions");
  }
}

void require_valid_point(const ValueVec& v) {
  if (v.size() < 2) {
    throw std::invalid_argument("objective vectors need at least 2 components");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("objective vectors must be finite");
    }
  }
}

BoundingBox::BoundingBox(ValueVec nadir_in, ValueVec ideal_in)
    : nadir(std::move(nadir_in)), ideal(std::move(ideal_in)) {
  require_same_dimension(nadir, ideal);
  require_valid_point(nadir);
  require_valid_point(ideal);
  for (std::size_t j = 0; j < nadir.size(); ++j) {
    if (!(ideal[j] > nadir[j])) {
      throw std::invalid_argument(
          "bounding box ideal must strictly dominate the nadir");
    }
  }
}

bool weakly_dominates(const ValueVec& v, const ValueVec& w) {
  require_same_dimension(v, w);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] < w[j]) return false;
  }
  return true;
}

bool pareto_dominates(const ValueVec& v, const ValueVec& w) {
  return v != w && weakly_dominates(v, w);
}

bool strictly_dominates(const ValueVec& v, const ValueVec& w) {
  require_same_dimension(v, w);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] <= w[j]) return false;
  }
  return true;
}

DominanceRelation compare(const ValueVec& v, const ValueVec& w) {
  require_same_dimension(v, w);
  if (v == w) return DominanceRelation::Equal;
  if (strictly_dominates(v, w)) return DominanceRelation::StrictlyDominates;
  if (weakly_dominates(v, w)) return DominanceRelation::ParetoDominates;
  if (strictly_dominates(w, v)) return DominanceRelation::StrictlyDominatedBy;
  if (weakly_dominates(w, v)) return DominanceRelation::ParetoDominatedBy;
  return DominanceRelation::Incomparable;
}

std::vector<ValueVec> pprune(const std::vector<ValueVec>& points) {
  if (points.empty()) {
    throw std::invalid_argument("pprune: empty input set");
  }
  for (const auto& p : points) require_same_dimension(points.front(), p);

  // Archive insertion: a point enters unless an archived point weakly
  // dominates it (this also collapses duplicates to the first occurrence),
  // and evicts archived points it Pareto dominates.
  std::vector<ValueVec> kept;
  for (const auto& p : points) {
    bool covered = false;
    for (const auto& q : kept) {
      if (weakly_dominates(q, p)) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    kept.erase(std::remove_if(kept.begin(), kept.end(),
                              [&](const ValueVec& q) {
                                return pareto_dominates(p, q);
                              }),
               kept.end());
    kept.push_back(p);
  }
  return kept;
}

double linf_dist(const ValueVec& v, const ValueVec& w) {
  require_same_dimension(v, w);
  double best = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    best = std::max(best, std::abs(v[j] - w[j]));
  }
  return best;
}

bool box_contains(const BoundingBox& b, const ValueVec& v) {
  require_same_dimension(b.nadir, v);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] < b.nadir[j] || v[j] > b.ideal[j]) return false;
  }
  return true;
}

bool lex_less(const ValueVec& a, const ValueVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

ValueVec negate(const ValueVec& v) {
  ValueVec out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = -v[j];
  return out;
}

}  // namespace modec
