// Shared test fixtures: independent brute-force oracles, random instance
// generators, and a scripted oracle. Everything here is deliberately naive
// and separate from the library's code paths so it can serve as ground
// truth.

#ifndef MODEC_TESTS_SUPPORT_HPP
#define MODEC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "modec/engine.hpp"
#include "modec/geometry.hpp"
#include "modec/io.hpp"
#include "modec/oracle.hpp"

namespace testsupport {

using modec::FrontPoint;
using modec::ValueVec;

/// Canonical form for set comparisons: lexicographically sorted, deduped.
inline std::vector<ValueVec> canonical(std::vector<ValueVec> points) {
  std::sort(points.begin(), points.end(), modec::lex_less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

inline std::vector<ValueVec> values_of(const std::vector<FrontPoint>& front) {
  std::vector<ValueVec> out;
  out.reserve(front.size());
  for (const auto& fp : front) out.push_back(fp.value);
  return out;
}

/// Independent nondominated filter: plain pairwise scan of every ordered
/// pair, canonicalised.
inline std::vector<ValueVec> brute_nondominated(
    const std::vector<ValueVec>& points) {
  std::vector<ValueVec> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k == i) continue;
      if (points[k] != points[i] &&
          modec::weakly_dominates(points[k], points[i])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(points[i]);
  }
  return canonical(out);
}

/// Independent minimal-antichain filter: keep x iff it Pareto-dominates no
/// other element.
inline std::vector<ValueVec> brute_minimal_antichain(
    const std::vector<ValueVec>& points) {
  std::vector<ValueVec> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominates_someone = false;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k != i && modec::pareto_dominates(points[i], points[k])) {
        dominates_someone = true;
        break;
      }
    }
    if (!dominates_someone) out.push_back(points[i]);
  }
  return canonical(out);
}

inline std::vector<ValueVec> random_points(std::mt19937_64& rng, int count,
                                           int dims, double lo = 0.0,
                                           double hi = 10.0) {
  std::uniform_real_distribution<double> coord(lo, hi);
  std::vector<ValueVec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ValueVec p(dims);
    for (double& x : p) x = coord(rng);
    out.push_back(std::move(p));
  }
  return out;
}

struct McEstimate {
  double mean = 0.0;
  double sigma = 0.0;
};

/// Monte Carlo volume of the union of boxes [ref, p]; the quadrature oracle
/// for the exact hypervolume.
inline McEstimate mc_hypervolume(const std::vector<ValueVec>& front,
                                 const ValueVec& ref, int samples,
                                 std::mt19937_64& rng) {
  std::vector<ValueVec> contributing;
  for (const auto& p : front) {
    if (modec::weakly_dominates(p, ref)) contributing.push_back(p);
  }
  if (contributing.empty()) return {};

  ValueVec hi = contributing.front();
  for (const auto& p : contributing) {
    for (std::size_t j = 0; j < hi.size(); ++j) hi[j] = std::max(hi[j], p[j]);
  }
  double box_volume = 1.0;
  for (std::size_t j = 0; j < hi.size(); ++j) box_volume *= hi[j] - ref[j];
  if (box_volume <= 0.0) return {};

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int covered = 0;
  ValueVec x(ref.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = ref[j] + unit(rng) * (hi[j] - ref[j]);
    }
    for (const auto& p : contributing) {
      if (modec::weakly_dominates(p, x)) {
        ++covered;
        break;
      }
    }
  }
  double rate = static_cast<double>(covered) / samples;
  McEstimate est;
  est.mean = rate * box_volume;
  est.sigma = box_volume * std::sqrt(rate * (1.0 - rate) / samples);
  return est;
}

/// Replays canned responses in order.
class ScriptedOracle : public modec::ParetoOracle {
 public:
  explicit ScriptedOracle(std::vector<modec::OracleResponse> script)
      : script_(std::move(script)) {}

  modec::OracleResponse query(const modec::OracleQuery&) override {
    if (next_ >= script_.size()) {
      throw std::runtime_error("scripted oracle ran out of responses");
    }
    return script_[next_++];
  }

  [[nodiscard]] std::size_t consumed() const { return next_; }

 private:
  std::vector<modec::OracleResponse> script_;
  std::size_t next_ = 0;
};

inline modec::OracleResponse success_response(ValueVec v, bool exact = true) {
  modec::OracleResponse r;
  r.success = true;
  r.value = std::move(v);
  r.exact = exact;
  return r;
}

inline modec::OracleResponse failure_response(bool exact = true) {
  modec::OracleResponse r;
  r.success = false;
  r.exact = exact;
  return r;
}

/// An explicit vector-set instance with engine init points and a tolerance.
struct RandomInstance {
  std::vector<ValueVec> points;
  modec::InitPoints init;
  std::vector<ValueVec> truth;  ///< nondominated subset of the points
  double tolerance = 0.0;
};

/// Draws a nondegenerate vector-set instance. Tolerances are sampled from
/// [0.8, 3.0] against the 10-unit coordinate range when positive, else 0.
inline RandomInstance random_instance(std::mt19937_64& rng, int dims,
                                      bool positive_tolerance,
                                      int min_points = 5, int max_points = 50) {
  std::uniform_int_distribution<int> count(min_points, max_points);
  std::uniform_real_distribution<double> tol(0.8, 3.0);
  for (;;) {
    RandomInstance inst;
    inst.points = random_points(rng, count(rng), dims);
    inst.init = modec::vector_set_init_points(inst.points);
    inst.truth = modec::pprune(inst.points);
    inst.tolerance = positive_tolerance ? tol(rng) : 0.0;
    if (inst.truth.size() > 1) return inst;
  }
}

/// The exact approximate-mode oracle for an instance, parameterised from its
/// search box.
inline modec::SetOracle instance_oracle(const RandomInstance& inst,
                                        const modec::SearchState& state,
                                        double rho = 0.01) {
  return modec::SetOracle(inst.points,
                          modec::AsfParams{modec::default_lambda(state.box), rho},
                          modec::OracleMode::Approximate);
}

}  // namespace testsupport

#endif  // MODEC_TESTS_SUPPORT_HPP
