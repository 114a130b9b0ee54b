#include "modec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace modec {

namespace {

/// Volume of the union of boxes [ref, p] over points, recursing on the last
/// dimension: sweep distinct levels top-down and multiply each slab's height
/// by the (d-1)-dimensional volume of the points reaching it.
double sweep(std::vector<ValueVec> points, const ValueVec& ref,
             std::size_t dims) {
  if (points.empty()) return 0.0;
  if (dims == 1) {
    double best = 0.0;
    for (const auto& p : points) best = std::max(best, p[0] - ref[0]);
    return best;
  }
  std::size_t axis = dims - 1;
  std::sort(points.begin(), points.end(),
            [axis](const ValueVec& a, const ValueVec& b) {
              return a[axis] > b[axis];
            });
  double volume = 0.0;
  std::vector<ValueVec> active;
  for (std::size_t i = 0; i < points.size(); ++i) {
    active.push_back(points[i]);
    double top = points[i][axis];
    double bottom = (i + 1 < points.size()) ? points[i + 1][axis] : ref[axis];
    double height = top - bottom;
    if (height > 0.0) {
      volume += height * sweep(active, ref, axis);
    }
  }
  return volume;
}

}  // namespace

double hypervolume(const std::vector<ValueVec>& front, const ValueVec& ref) {
  if (front.empty()) return 0.0;
  require_valid_point(ref);
  if (ref.size() > 6) {
    throw std::invalid_argument("exact hypervolume supports up to 6 objectives");
  }
  std::vector<ValueVec> contributing;
  for (const auto& p : front) {
    require_same_dimension(ref, p);
    if (weakly_dominates(p, ref)) contributing.push_back(p);
  }
  if (contributing.empty()) return 0.0;
  return sweep(std::move(contributing), ref, ref.size());
}

UtilityFn::UtilityFn(BoundingBox box, std::vector<std::vector<double>> gradients)
    : box_(std::move(box)), gradients_(std::move(gradients)) {
  if (gradients_.size() != box_.dimensions()) {
    throw std::invalid_argument("utility needs one gradient row per axis");
  }
  for (const auto& row : gradients_) {
    if (row.size() != kCellsPerAxis) {
      throw std::invalid_argument("utility gradient rows need 6 cells");
    }
    for (double g : row) {
      if (!(g >= 0.0)) {
        throw std::invalid_argument("utility gradients must be >= 0");
      }
    }
  }
  double top = raw(box_.ideal);
  if (!(top > 0.0)) {
    throw std::invalid_argument("utility gradients must not all vanish");
  }
  scale_ = 1.0 / top;
}

double UtilityFn::raw(const ValueVec& v) const {
  double total = 0.0;
  for (std::size_t j = 0; j < gradients_.size(); ++j) {
    double lo = box_.nadir[j];
    double width = (box_.ideal[j] - lo) / kCellsPerAxis;
    double x = std::clamp(v[j], lo, box_.ideal[j]);
    // Cumulative gradient mass below x along this axis.
    for (int cell = 0; cell < kCellsPerAxis; ++cell) {
      double cell_lo = lo + cell * width;
      double cell_hi = cell_lo + width;
      if (x >= cell_hi) {
        total += gradients_[j][cell] * width;
      } else {
        if (x > cell_lo) total += gradients_[j][cell] * (x - cell_lo);
        break;
      }
    }
  }
  return total;
}

double UtilityFn::operator()(const ValueVec& v) const {
  require_same_dimension(box_.nadir, v);
  return raw(v) * scale_;
}

std::vector<UtilityFn> generate_utilities(const BoundingBox& box, int count,
                                          std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("utility count must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gradient(0.0, 5.0);
  std::vector<UtilityFn> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<std::vector<double>> grads(
        box.dimensions(), std::vector<double>(UtilityFn::kCellsPerAxis));
    for (auto& row : grads) {
      for (double& g : row) g = gradient(rng);
    }
    out.emplace_back(box, std::move(grads));
  }
  return out;
}

double max_utility_loss(const std::vector<ValueVec>& approx,
                        const std::vector<ValueVec>& true_front,
                        const std::vector<UtilityFn>& utilities) {
  if (approx.empty() || true_front.empty()) {
    throw std::invalid_argument("utility loss needs non-empty fronts");
  }
  if (utilities.empty()) {
    throw std::invalid_argument("utility loss needs at least one utility");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& u : utilities) {
    double best_true = -std::numeric_limits<double>::infinity();
    for (const auto& v : true_front) best_true = std::max(best_true, u(v));
    double best_approx = -std::numeric_limits<double>::infinity();
    for (const auto& v : approx) best_approx = std::max(best_approx, u(v));
    worst = std::max(worst, best_true - best_approx);
  }
  return worst;
}

double epsilon_error(const std::vector<ValueVec>& approx,
                     const std::vector<ValueVec>& true_front) {
  if (approx.empty() || true_front.empty()) {
    throw std::invalid_argument("epsilon error needs non-empty fronts");
  }
  double worst = 0.0;
  for (const auto& t : true_front) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& a : approx) {
      nearest = std::min(nearest, linf_dist(t, a));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

double shift_error(const std::vector<ValueVec>& approx,
                   const std::vector<ValueVec>& true_front) {
  if (approx.empty() || true_front.empty()) {
    throw std::invalid_argument("shift error needs non-empty fronts");
  }
  double worst = 0.0;
  for (const auto& t : true_front) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& a : approx) {
      require_same_dimension(t, a);
      double shift = 0.0;
      for (std::size_t j = 0; j < t.size(); ++j) {
        shift = std::max(shift, t[j] - a[j]);
      }
      nearest = std::min(nearest, std::max(shift, 0.0));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace modec
