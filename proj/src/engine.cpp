#include "modec/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modec {

namespace {

/// Per-axis factor of the offset that turns the estimated nadir into a
/// strict lower bound.
constexpr double kNadirStrictness = 1e-6;

/// Slack for box-membership checks on oracle values.
constexpr double kBoxSlack = 1e-9;

/// Minimal antichain: drop every element that Pareto-dominates another one;
/// duplicates collapse to the first occurrence.
std::vector<ValueVec> prune_minimal(const std::vector<ValueVec>& xs) {
  std::vector<ValueVec> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool drop = false;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k != i && pareto_dominates(xs[i], xs[k])) {
        drop = true;
        break;
      }
    }
    if (drop) continue;
    if (std::find(out.begin(), out.end(), xs[i]) != out.end()) continue;
    out.push_back(xs[i]);
  }
  return out;
}

/// Maximal antichain: drop every element Pareto-dominated by another one.
std::vector<ValueVec> prune_maximal(const std::vector<ValueVec>& xs) {
  std::vector<ValueVec> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool drop = false;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k != i && pareto_dominates(xs[k], xs[i])) {
        drop = true;
        break;
      }
    }
    if (drop) continue;
    if (std::find(out.begin(), out.end(), xs[i]) != out.end()) continue;
    out.push_back(xs[i]);
  }
  return out;
}

void sort_lex(std::vector<ValueVec>& xs) {
  std::sort(xs.begin(), xs.end(), lex_less);
}

/// Drops corners that left the reachable boundary.
///
/// A lower bound dies when its target region is already excluded (it weakly
/// dominates a front value or completed referent) or is clipped away by the
/// box (a coordinate at the ideal leaves nothing strictly above). An upper
/// bound dies when the front dominates it, or a coordinate at the nadir
/// leaves no feasible point weakly below it (the nadir is a strict lower
/// bound of everything feasible).
void filter_corners(SearchState& s) {
  auto lower_dead = [&](const ValueVec& l) {
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (l[j] >= s.box.ideal[j]) return true;
    }
    for (const auto& fp : s.front) {
      if (weakly_dominates(l, fp.value)) return true;
    }
    for (const auto& c : s.completed) {
      if (weakly_dominates(l, c)) return true;
    }
    return false;
  };
  auto upper_dead = [&](const ValueVec& u) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (u[j] <= s.box.nadir[j]) return true;
    }
    for (const auto& fp : s.front) {
      if (weakly_dominates(fp.value, u)) return true;
    }
    return false;
  };
  s.lower.erase(std::remove_if(s.lower.begin(), s.lower.end(), lower_dead),
                s.lower.end());
  s.upper.erase(std::remove_if(s.upper.begin(), s.upper.end(), upper_dead),
                s.upper.end());
}

void check_inside_box(const BoundingBox& box, const ValueVec& v) {
  require_same_dimension(box.nadir, v);
  for (std::size_t j = 0; j < v.size(); ++j) {
    double slack = kBoxSlack * std::max(1.0, box.ideal[j] - box.nadir[j]);
    if (v[j] < box.nadir[j] - slack || v[j] > box.ideal[j] + slack) {
      throw std::runtime_error("oracle value lies outside the bounding box");
    }
  }
}

void append_record(SearchState& s, const ValueVec& referent,
                   OracleResponse response) {
  IterationRecord rec;
  rec.t = static_cast<std::int64_t>(s.history.size());
  rec.referent = referent;
  rec.response = std::move(response);
  rec.error_bound_after = error_upper_bound(s);
  s.history.push_back(std::move(rec));
}

void apply_success_impl(SearchState& s, const ValueVec& referent,
                        const OracleResponse& response,
                        bool check_contradiction) {
  if (!response.success || !response.value) {
    throw std::invalid_argument("apply_success needs a successful response");
  }
  const ValueVec& v = *response.value;
  require_valid_point(v);
  check_inside_box(s.box, v);
  if (response.exact && !strictly_dominates(v, referent)) {
    throw std::logic_error(
        "exact oracle returned a value not strictly dominating the referent");
  }
  if (check_contradiction && contradicts(s, v)) {
    throw ContradictionError(
        "oracle value strictly dominates a recorded result");
  }
  s.front.push_back(FrontPoint{v, response.solution.value_or(-1)});
  s.lower = update_lower(v, s.lower);
  s.upper = update_upper(v, s.upper);
  filter_corners(s);
  append_record(s, referent, response);
}

}  // namespace

std::vector<ValueVec> update_lower(const ValueVec& vstar,
                                   const std::vector<ValueVec>& lower) {
  std::vector<ValueVec> candidates;
  for (const auto& l : lower) {
    require_same_dimension(vstar, l);
    if (strictly_dominates(vstar, l)) {
      for (std::size_t j = 0; j < l.size(); ++j) {
        ValueVec sub = l;
        sub[j] = vstar[j];
        candidates.push_back(std::move(sub));
      }
    } else {
      candidates.push_back(l);
    }
  }
  auto out = prune_minimal(candidates);
  sort_lex(out);
  return out;
}

std::vector<ValueVec> update_upper(const ValueVec& vstar,
                                   const std::vector<ValueVec>& upper) {
  std::vector<ValueVec> candidates;
  for (const auto& u : upper) {
    require_same_dimension(vstar, u);
    if (strictly_dominates(u, vstar)) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        ValueVec sub = u;
        sub[j] = vstar[j];
        candidates.push_back(std::move(sub));
      }
    } else {
      candidates.push_back(u);
    }
  }
  auto out = prune_maximal(candidates);
  sort_lex(out);
  return out;
}

double error_upper_bound(const SearchState& s) {
  if (s.front.empty()) {
    throw std::logic_error("error bound undefined on an empty front");
  }
  if (s.upper.empty()) return 0.0;
  // The gap from u to the front is the additive shift a front value needs
  // to weakly dominate u. Unlike the full L-inf distance it is monotone
  // under lowering u, which is what makes the bound certified and
  // non-increasing: every remaining solution is weakly dominated by some u,
  // so its own shift from the front can only be smaller.
  double worst = 0.0;
  for (const auto& u : s.upper) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& fp : s.front) {
      double shift = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        shift = std::max(shift, u[j] - fp.value[j]);
      }
      nearest = std::min(nearest, std::max(shift, 0.0));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

std::int64_t worst_case_iterations(const BoundingBox& box, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("iteration budget needs a tolerance > 0");
  }
  const std::int64_t saturated = std::numeric_limits<std::int64_t>::max();
  __int128 cells = 1;
  __int128 inner_cells = 1;
  for (std::size_t j = 0; j < box.dimensions(); ++j) {
    double ratio = (box.ideal[j] - box.nadir[j]) / tau;
    double k_real = std::ceil(ratio);
    if (!(k_real < 9.0e18)) return saturated;
    auto k = static_cast<std::int64_t>(k_real);
    if (k < 1) k = 1;
    cells *= k;
    inner_cells *= (k - 1);
    if (cells > static_cast<__int128>(saturated)) return saturated;
  }
  return static_cast<std::int64_t>(cells - inner_cells);
}

SearchState init_search(const std::vector<ValueVec>& max_points,
                        const std::vector<ValueVec>& min_points,
                        double tolerance) {
  if (max_points.empty() || min_points.empty()) {
    throw std::invalid_argument("init needs maximal and minimal points");
  }
  if (tolerance < 0.0) {
    throw std::invalid_argument("tolerance must be >= 0");
  }
  const std::size_t d = max_points.front().size();
  for (const auto& p : max_points) {
    require_valid_point(p);
    require_same_dimension(max_points.front(), p);
  }
  for (const auto& p : min_points) {
    require_valid_point(p);
    require_same_dimension(max_points.front(), p);
  }
  if (max_points.size() != d) {
    throw std::invalid_argument("need exactly one maximal point per objective");
  }
  auto pruned = pprune(max_points);
  if (pruned.size() <= 1) {
    throw DegenerateFrontError(
        "at most one nondominated initial point; nothing to search");
  }
  for (std::size_t j = 0; j < d; ++j) {
    double column_max = max_points[0][j];
    for (const auto& p : max_points) column_max = std::max(column_max, p[j]);
    if (max_points[j][j] < column_max) {
      throw std::invalid_argument(
          "maximal point j must be maximal in objective j");
    }
  }

  ValueVec ideal = max_points.front();
  for (const auto& p : max_points) {
    for (std::size_t j = 0; j < d; ++j) ideal[j] = std::max(ideal[j], p[j]);
  }
  ValueVec nadir = min_points.front();
  for (const auto& p : min_points) {
    for (std::size_t j = 0; j < d; ++j) nadir[j] = std::min(nadir[j], p[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    double span = ideal[j] - nadir[j];
    if (span < 0.0) {
      throw std::invalid_argument("minimal points exceed the ideal");
    }
    nadir[j] -= kNadirStrictness * std::max(1.0, span);
  }

  SearchState s{BoundingBox(nadir, ideal), tolerance, {}, {}, {}, {}, {}};
  for (const auto& p : pruned) s.front.push_back(FrontPoint{p, -1});
  s.lower = {s.box.nadir};
  s.upper = {s.box.ideal};
  for (const auto& p : max_points) {
    s.lower = update_lower(p, s.lower);
  }
  filter_corners(s);
  return s;
}

namespace {

/// A failure at @p referent certified that no feasible value reaches
/// referent + tolerance; only a value in that region proves it wrong. At
/// tolerance 0 the warrant is plain strict dominance.
bool breaks_failure_warrant(const ValueVec& value, const ValueVec& referent,
                            double tolerance) {
  if (tolerance <= 0.0) return strictly_dominates(value, referent);
  ValueVec shifted = referent;
  for (double& x : shifted) x += tolerance;
  return weakly_dominates(value, shifted);
}

}  // namespace

bool contradicts(const SearchState& s, const ValueVec& value) {
  for (const auto& fp : s.front) {
    if (strictly_dominates(value, fp.value)) return true;
  }
  for (const auto& c : s.completed) {
    if (breaks_failure_warrant(value, c, s.tolerance)) return true;
  }
  return false;
}

void apply_success(SearchState& s, const ValueVec& referent,
                   const OracleResponse& response) {
  apply_success_impl(s, referent, response, /*check_contradiction=*/true);
}

void apply_failure(SearchState& s, const ValueVec& referent) {
  OracleResponse response;
  response.success = false;
  auto it = std::find(s.lower.begin(), s.lower.end(), referent);
  if (it == s.lower.end()) {
    throw std::invalid_argument(
        "failed referent is not a current lower bound");
  }
  ValueVec closed = referent;  // the argument may alias the erased entry
  s.lower.erase(it);
  s.completed.push_back(closed);
  s.upper = update_upper(closed, s.upper);
  filter_corners(s);
  append_record(s, closed, std::move(response));
}

ValueVec select_referent(const SearchState& s,
                         const SelectionStrategy& strategy,
                         std::mt19937_64& rng) {
  if (s.lower.empty()) {
    throw std::logic_error("no lower bounds left to select from");
  }
  bool random_pick = strategy.kind == SelectionKind::UniformRandom;
  if (strategy.kind == SelectionKind::EpsilonMixed) {
    if (!(strategy.mix_probability >= 0.0 && strategy.mix_probability <= 1.0)) {
      throw std::invalid_argument("mix probability must lie in [0, 1]");
    }
    random_pick =
        std::bernoulli_distribution(strategy.mix_probability)(rng);
  }
  if (random_pick) {
    std::uniform_int_distribution<std::size_t> pick(0, s.lower.size() - 1);
    return s.lower[pick(rng)];
  }

  // Greedy: best axis-aligned volume from l to a strictly dominating upper
  // bound. The lower set is lexicographically sorted, so the first maximum
  // is the lexicographically smallest tie.
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < s.lower.size(); ++i) {
    const ValueVec& l = s.lower[i];
    double score = 0.0;
    for (const auto& u : s.upper) {
      if (!strictly_dominates(u, l)) continue;
      double volume = 1.0;
      for (std::size_t j = 0; j < l.size(); ++j) volume *= u[j] - l[j];
      score = std::max(score, volume);
    }
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return s.lower[best];
}

std::vector<FrontPoint> prune_front(const std::vector<FrontPoint>& front) {
  std::vector<FrontPoint> kept;
  for (const auto& fp : front) {
    bool covered = false;
    for (const auto& q : kept) {
      if (weakly_dominates(q.value, fp.value)) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    kept.erase(std::remove_if(kept.begin(), kept.end(),
                              [&](const FrontPoint& q) {
                                return pareto_dominates(fp.value, q.value);
                              }),
               kept.end());
    kept.push_back(fp);
  }
  return kept;
}

Engine::Engine(const std::vector<ValueVec>& max_points,
               const std::vector<ValueVec>& min_points, double tolerance,
               SelectionStrategy strategy, std::uint64_t seed)
    : state_(init_search(max_points, min_points, tolerance)),
      initial_(state_), strategy_(strategy), rng_(seed) {}

bool Engine::finished() const {
  return state_.upper.empty() ||
         error_upper_bound(state_) <= state_.tolerance;
}

ValueVec Engine::select_referent() {
  return modec::select_referent(state_, strategy_, rng_);
}

IterationRecord Engine::step(ParetoOracle& oracle) {
  if (finished()) {
    throw std::logic_error("stepping a finished search");
  }
  last_step_replayed_ = false;
  std::int64_t t = steps_taken_++;
  ValueVec referent = modec::select_referent(state_, strategy_, rng_);
  OracleResponse response = oracle.query(OracleQuery{referent, state_.tolerance});
  if (response.success) {
    if (!response.value) {
      throw std::runtime_error("successful oracle response carries no value");
    }
    require_same_dimension(state_.box.nadir, *response.value);
    if (contradicts(state_, *response.value)) {
      replay_correction(response);
      last_step_replayed_ = true;
    } else {
      apply_success(state_, referent, response);
    }
  } else {
    apply_failure(state_, referent);
    // Keep the oracle's own failure response in the applied record.
    state_.history.back().response = response;
  }
  IterationRecord external;
  external.t = t;
  external.referent = std::move(referent);
  external.response = std::move(response);
  external.error_bound_after = error_upper_bound(state_);
  return external;
}

void Engine::replay_correction(const OracleResponse& response) {
  if (!response.success || !response.value) {
    throw std::invalid_argument("replay needs a successful response");
  }
  const ValueVec new_value = *response.value;

  auto is_contradicted = [&](const IterationRecord& r) {
    if (r.response.success) {
      return strictly_dominates(new_value, *r.response.value);
    }
    return breaks_failure_warrant(new_value, r.referent, state_.tolerance);
  };

  std::int64_t offending = -1;
  for (std::size_t i = 0; i < state_.history.size(); ++i) {
    if (is_contradicted(state_.history[i])) {
      offending = static_cast<std::int64_t>(i);
      break;
    }
  }
  if (offending < 0) {
    if (!contradicts(state_, new_value)) {
      throw std::invalid_argument("replay requested without a contradiction");
    }
    // Strictly dominating an initial point means the instance's maximal
    // points were not weakly optimal; no recorded query is to blame.
    throw ContradictionError(
        "oracle value strictly dominates an initial front point");
  }

  ReplayEvent event;
  event.at_step = steps_taken_ - 1;
  event.offending_step = offending;
  event.new_value = new_value;
  for (const auto& fp : state_.front) {
    if (strictly_dominates(new_value, fp.value)) {
      event.dropped_values.push_back(fp.value);
    }
  }
  for (const auto& c : state_.completed) {
    if (breaks_failure_warrant(new_value, c, state_.tolerance)) {
      event.reopened_referents.push_back(c);
    }
  }

  std::vector<IterationRecord> old = std::move(state_.history);
  state_ = initial_;

  // Records before the offending step replay verbatim.
  for (std::int64_t i = 0; i < offending; ++i) {
    const IterationRecord& r = old[i];
    if (r.response.success) {
      apply_success_impl(state_, r.referent, r.response, false);
    } else {
      apply_failure(state_, r.referent);
      state_.history.back().response = r.response;
    }
  }

  // The new value is treated as the answer the offending referent should
  // have received.
  apply_success_impl(state_, old[offending].referent, response, false);

  // Later records are reused where a current lower bound still supports
  // them; records the new value itself contradicts are dropped.
  for (std::size_t i = offending + 1; i < old.size(); ++i) {
    const IterationRecord& r = old[i];
    if (is_contradicted(r)) continue;
    if (r.response.success) {
      const ValueVec& v = *r.response.value;
      auto it = std::find_if(state_.lower.begin(), state_.lower.end(),
                             [&](const ValueVec& l) {
                               return strictly_dominates(v, l);
                             });
      if (it != state_.lower.end()) {
        ValueVec support = *it;  // the update replaces the lower set
        apply_success_impl(state_, support, r.response, false);
      }
    } else {
      auto it = std::find_if(state_.lower.begin(), state_.lower.end(),
                             [&](const ValueVec& l) {
                               return weakly_dominates(l, r.referent);
                             });
      if (it != state_.lower.end()) {
        ValueVec transfer = *it;
        apply_failure(state_, transfer);
        state_.history.back().response = r.response;
      }
    }
  }

  replays_.push_back(std::move(event));
}

FrontResult Engine::run(ParetoOracle& oracle, std::int64_t budget,
                        const StepObserver& observer) {
  if (budget < 1) {
    throw std::invalid_argument("budget must be >= 1");
  }
  std::int64_t iterations = 0;
  Termination termination;
  for (;;) {
    if (state_.upper.empty()) {
      termination = Termination::Exhausted;
      break;
    }
    if (error_upper_bound(state_) <= state_.tolerance) {
      termination = Termination::Converged;
      break;
    }
    if (iterations >= budget) {
      termination = Termination::BudgetExhausted;
      break;
    }
    IterationRecord record = step(oracle);
    ++iterations;
    if (observer) {
      StepInfo info;
      info.t = record.t;
      info.referent = record.referent;
      info.response = record.response;
      info.error_bound = record.error_bound_after;
      info.front_size = state_.front.size();
      info.lower_size = state_.lower.size();
      info.upper_size = state_.upper.size();
      info.replay_triggered = last_step_replayed_;
      observer(info, state_);
    }
  }

  FrontResult result;
  result.front = pareto_front();
  result.error_bound = error_upper_bound(state_);
  result.termination = termination;
  result.iterations = iterations;
  result.history = state_.history;
  result.replays = replays_;
  return result;
}

std::vector<FrontPoint> Engine::pareto_front() const {
  return prune_front(state_.front);
}

namespace {

struct Rectangle {
  ValueVec lower;
  ValueVec upper;

  [[nodiscard]] double area() const {
    return (upper[0] - lower[0]) * (upper[1] - lower[1]);
  }
  [[nodiscard]] double gap() const {
    return std::max(upper[0] - lower[0], upper[1] - lower[1]);
  }
};

}  // namespace

FrontResult run_2d(const SearchState& initial, SelectionStrategy strategy,
                   std::uint64_t seed, ParetoOracle& oracle,
                   std::int64_t budget, const StepObserver2d& observer) {
  if (initial.box.dimensions() != 2) {
    throw std::invalid_argument("the rectangle engine needs d = 2");
  }
  if (!initial.history.empty()) {
    throw std::invalid_argument("the rectangle engine needs a fresh state");
  }
  if (budget < 1) {
    throw std::invalid_argument("budget must be >= 1");
  }

  std::mt19937_64 rng(seed);
  std::vector<FrontPoint> raw_front = initial.front;
  std::vector<Rectangle> rects;
  for (const auto& l : initial.lower) {
    for (const auto& u : initial.upper) {
      if (strictly_dominates(u, l)) rects.push_back(Rectangle{l, u});
    }
  }

  auto max_gap = [&]() {
    double g = 0.0;
    for (const auto& r : rects) g = std::max(g, r.gap());
    return g;
  };

  std::vector<IterationRecord> history;
  std::vector<ReplayEvent> no_replays;
  std::int64_t iterations = 0;
  Termination termination;
  for (;;) {
    if (rects.empty()) {
      termination = Termination::Exhausted;
      break;
    }
    if (max_gap() <= initial.tolerance) {
      termination = Termination::Converged;
      break;
    }
    if (iterations >= budget) {
      termination = Termination::BudgetExhausted;
      break;
    }

    bool random_pick = strategy.kind == SelectionKind::UniformRandom;
    if (strategy.kind == SelectionKind::EpsilonMixed) {
      random_pick =
          std::bernoulli_distribution(strategy.mix_probability)(rng);
    }
    std::size_t pick = 0;
    if (random_pick) {
      pick = std::uniform_int_distribution<std::size_t>(
          0, rects.size() - 1)(rng);
    } else {
      for (std::size_t i = 1; i < rects.size(); ++i) {
        if (rects[i].area() > rects[pick].area() ||
            (rects[i].area() == rects[pick].area() &&
             lex_less(rects[i].lower, rects[pick].lower))) {
          pick = i;
        }
      }
    }

    Rectangle rect = rects[pick];
    OracleResponse response =
        oracle.query(OracleQuery{rect.lower, initial.tolerance});
    rects.erase(rects.begin() + static_cast<std::ptrdiff_t>(pick));
    if (response.success) {
      const ValueVec& v = *response.value;
      require_same_dimension(rect.lower, v);
      raw_front.push_back(FrontPoint{v, response.solution.value_or(-1)});
      // At most two live rectangles on either side of the new value.
      Rectangle left{{rect.lower[0], v[1]}, {v[0], rect.upper[1]}};
      Rectangle right{{v[0], rect.lower[1]}, {rect.upper[0], v[1]}};
      if (strictly_dominates(left.upper, left.lower)) rects.push_back(left);
      if (strictly_dominates(right.upper, right.lower)) rects.push_back(right);
    }

    IterationRecord record;
    record.t = iterations;
    record.referent = rect.lower;
    record.response = response;
    record.error_bound_after = max_gap();
    history.push_back(record);
    ++iterations;

    if (observer) {
      StepInfo2d info;
      info.t = record.t;
      info.referent = record.referent;
      info.response = response;
      info.gap_error = record.error_bound_after;
      info.rectangle_count = rects.size();
      double total = 0.0;
      for (const auto& r : rects) total += r.area();
      info.rectangle_area_sum = total;
      info.front_size = raw_front.size();
      observer(info);
    }
  }

  FrontResult result;
  result.front = prune_front(raw_front);
  result.error_bound = max_gap();
  result.termination = termination;
  result.iterations = iterations;
  result.history = std::move(history);
  result.replays = std::move(no_replays);
  return result;
}

}  // namespace modec
