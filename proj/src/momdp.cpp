#include "modec/momdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modec {

namespace {

constexpr double kProbabilityTolerance = 1e-9;

/// Indices of the nondominated elements of @p values, first-seen order.
std::vector<std::size_t> nondominated_indices(
    const std::vector<ValueVec>& values) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool covered = false;
    for (std::size_t k : kept) {
      if (weakly_dominates(values[k], values[i])) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    kept.erase(std::remove_if(kept.begin(), kept.end(),
                              [&](std::size_t k) {
                                return pareto_dominates(values[i], values[k]);
                              }),
               kept.end());
    kept.push_back(i);
  }
  return kept;
}

bool is_deterministic(const TabularMomdp& m) {
  for (int s = 0; s < m.num_states; ++s) {
    for (int a = 0; a < m.num_actions; ++a) {
      for (int sp = 0; sp < m.num_states; ++sp) {
        double p = m.prob(s, a, sp);
        if (p != 0.0 && p != 1.0) return false;
      }
    }
  }
  return true;
}

int point_mass_state(const TabularMomdp& m) {
  for (int s = 0; s < m.num_states; ++s) {
    if (m.initial_dist[s] == 1.0) return s;
  }
  return -1;
}

int deterministic_successor(const TabularMomdp& m, int s, int a) {
  for (int sp = 0; sp < m.num_states; ++sp) {
    if (m.prob(s, a, sp) == 1.0) return sp;
  }
  throw std::logic_error("no successor in deterministic instance");
}

}  // namespace

std::vector<std::string> validate(const TabularMomdp& m) {
  std::vector<std::string> violations;
  auto report = [&](const std::string& msg) { violations.push_back(msg); };

  if (m.num_states < 1) report("num_states must be >= 1");
  if (m.num_actions < 1) report("num_actions must be >= 1");
  if (m.num_objectives < 2) report("num_objectives must be >= 2");
  if (!(m.gamma > 0.0 && m.gamma <= 1.0)) {
    report("gamma must lie in (0, 1]");
  }
  if (m.horizon < 1) report("horizon must be >= 1");
  if (m.num_states < 1 || m.num_actions < 1 || m.num_objectives < 2) {
    return violations;  // size checks below would be meaningless
  }

  const std::size_t cells = static_cast<std::size_t>(m.num_states) *
                            m.num_actions * m.num_states;
  if (m.transitions.size() != cells) {
    report("transition table has wrong size");
    return violations;
  }
  if (m.rewards.size() != cells) {
    report("reward table has wrong size");
    return violations;
  }

  for (int s = 0; s < m.num_states; ++s) {
    for (int a = 0; a < m.num_actions; ++a) {
      double row = 0.0;
      for (int sp = 0; sp < m.num_states; ++sp) {
        double p = m.prob(s, a, sp);
        if (p < 0.0 || p > 1.0) {
          std::ostringstream os;
          os << "P(" << sp << "|" << s << "," << a << ") outside [0,1]";
          report(os.str());
        }
        row += p;
        const ValueVec& r = m.reward(s, a, sp);
        if (static_cast<int>(r.size()) != m.num_objectives) {
          std::ostringstream os;
          os << "reward (" << s << "," << a << "," << sp
             << ") has wrong dimension";
          report(os.str());
        } else {
          for (double x : r) {
            if (!std::isfinite(x)) {
              std::ostringstream os;
              os << "reward (" << s << "," << a << "," << sp << ") not finite";
              report(os.str());
              break;
            }
          }
        }
      }
      if (std::abs(row - 1.0) > kProbabilityTolerance) {
        std::ostringstream os;
        os << "transition row (s=" << s << ",a=" << a << ") sums to " << row;
        report(os.str());
      }
    }
  }

  if (static_cast<int>(m.initial_dist.size()) != m.num_states) {
    report("initial distribution has wrong size");
  } else {
    double total = 0.0;
    for (double p : m.initial_dist) {
      if (p < 0.0 || p > 1.0) report("initial distribution entry outside [0,1]");
      total += p;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os << "initial distribution sums to " << total;
      report(os.str());
    }
  }

  for (int s : m.terminal_states) {
    if (s < 0 || s >= m.num_states) report("terminal state index out of range");
  }
  return violations;
}

ScalarSolution scalar_value_iteration(const TabularMomdp& m, int objective,
                                      Sense sense) {
  if (objective < 0 || objective >= m.num_objectives) {
    throw std::invalid_argument("objective index out of range");
  }
  const double sign = (sense == Sense::Maximize) ? 1.0 : -1.0;
  const int S = m.num_states;
  const int H = m.horizon;

  std::vector<double> next(S, 0.0);
  std::vector<double> cur(S, 0.0);
  PolicyTable policy(S, H);

  for (int t = H - 1; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      if (m.is_terminal(s)) {
        cur[s] = 0.0;
        continue;
      }
      double best = 0.0;
      int best_action = 0;
      for (int a = 0; a < m.num_actions; ++a) {
        double q = 0.0;
        for (int sp = 0; sp < S; ++sp) {
          double p = m.prob(s, a, sp);
          if (p == 0.0) continue;
          q += p * (sign * m.reward(s, a, sp)[objective] + m.gamma * next[sp]);
        }
        if (a == 0 || q > best) {
          best = q;
          best_action = a;
        }
      }
      cur[s] = best;
      policy.set_action(s, t, best_action);
    }
    next = cur;
  }

  double value = 0.0;
  for (int s = 0; s < S; ++s) value += m.initial_dist[s] * next[s];
  return ScalarSolution{sign * value, std::move(policy)};
}

ValueVec policy_return(const TabularMomdp& m, const PolicyTable& policy) {
  if (policy.num_states != m.num_states || policy.horizon != m.horizon) {
    throw std::invalid_argument("policy shape does not match the instance");
  }
  const int S = m.num_states;
  const int d = m.num_objectives;

  std::vector<ValueVec> next(S, ValueVec(d, 0.0));
  std::vector<ValueVec> cur(S, ValueVec(d, 0.0));
  for (int t = m.horizon - 1; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      ValueVec& v = cur[s];
      std::fill(v.begin(), v.end(), 0.0);
      if (m.is_terminal(s)) continue;
      int a = policy.action(s, t);
      if (a < 0 || a >= m.num_actions) {
        throw std::invalid_argument("policy action out of range");
      }
      for (int sp = 0; sp < S; ++sp) {
        double p = m.prob(s, a, sp);
        if (p == 0.0) continue;
        const ValueVec& r = m.reward(s, a, sp);
        for (int j = 0; j < d; ++j) {
          v[j] += p * (r[j] + m.gamma * next[sp][j]);
        }
      }
    }
    std::swap(cur, next);
  }

  ValueVec out(d, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < d; ++j) out[j] += m.initial_dist[s] * next[s][j];
  }
  return out;
}

ValueVec rollout(const TabularMomdp& m, const PolicyTable& policy,
                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&](auto prob_of) {
    double u = unit(rng);
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < m.num_states; ++i) {
      double p = prob_of(i);
      if (p == 0.0) continue;
      acc += p;
      last = i;
      if (u < acc) return i;
    }
    return last;  // guard against rounding at acc ~ 1
  };

  int s = sample([&](int i) { return m.initial_dist[i]; });
  AccruedReward accrued = AccruedReward::zero(m.num_objectives);
  double discount = 1.0;
  for (int t = 0; t < m.horizon; ++t) {
    if (m.is_terminal(s)) break;
    int a = policy.action(s, t);
    int sp = sample([&](int i) { return m.prob(s, a, i); });
    accrued.add(discount, m.reward(s, a, sp));
    discount *= m.gamma;
    s = sp;
  }
  return accrued.value;
}

namespace {

struct BackupNode {
  ValueVec value;
  int action = -1;  // -1 marks horizon/terminal leaves
  int successor_entry = -1;
};

std::vector<ReturnSetEntry> enumerate_deterministic(const TabularMomdp& m) {
  const int S = m.num_states;
  const int H = m.horizon;
  const int d = m.num_objectives;
  const int start = point_mass_state(m);

  // layers[t][s] holds the nondominated continuations from (s, t).
  std::vector<std::vector<std::vector<BackupNode>>> layers(
      H + 1, std::vector<std::vector<BackupNode>>(S));
  for (int s = 0; s < S; ++s) {
    layers[H][s].push_back(BackupNode{ValueVec(d, 0.0), -1, -1});
  }

  for (int t = H - 1; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      if (m.is_terminal(s)) {
        layers[t][s].push_back(BackupNode{ValueVec(d, 0.0), -1, -1});
        continue;
      }
      std::vector<ValueVec> candidates;
      std::vector<std::pair<int, int>> provenance;  // (action, entry)
      for (int a = 0; a < m.num_actions; ++a) {
        int sp = deterministic_successor(m, s, a);
        const ValueVec& r = m.reward(s, a, sp);
        const auto& nexts = layers[t + 1][sp];
        for (std::size_t e = 0; e < nexts.size(); ++e) {
          ValueVec g(d);
          for (int j = 0; j < d; ++j) {
            g[j] = r[j] + m.gamma * nexts[e].value[j];
          }
          candidates.push_back(std::move(g));
          provenance.emplace_back(a, static_cast<int>(e));
        }
      }
      auto kept = nondominated_indices(candidates);
      auto& cell = layers[t][s];
      cell.reserve(kept.size());
      for (std::size_t k : kept) {
        cell.push_back(BackupNode{std::move(candidates[k]),
                                  provenance[k].first, provenance[k].second});
      }
    }
  }

  std::vector<ReturnSetEntry> out;
  const auto& roots = layers[0][start];
  out.reserve(roots.size());
  for (std::size_t e = 0; e < roots.size(); ++e) {
    PolicyTable policy(S, H);
    int s = start;
    int entry = static_cast<int>(e);
    for (int t = 0; t < H; ++t) {
      const BackupNode& node = layers[t][s][entry];
      if (node.action < 0) break;
      policy.set_action(s, t, node.action);
      s = deterministic_successor(m, s, node.action);
      entry = node.successor_entry;
    }
    out.push_back(ReturnSetEntry{roots[e].value, std::move(policy)});
  }
  return out;
}

}  // namespace

std::vector<ReturnSetEntry> enumerate_returns_exhaustive(const TabularMomdp& m,
                                                         std::size_t cap) {
  const int S = m.num_states;
  const int H = m.horizon;
  const std::size_t cells = static_cast<std::size_t>(S) * H;

  double log_count = cells * std::log(static_cast<double>(m.num_actions));
  if (log_count > std::log(static_cast<double>(cap)) + 1e-12) {
    throw CapacityError("policy enumeration exceeds the configured cap");
  }

  std::vector<int> odometer(cells, 0);
  std::vector<ValueVec> values;
  std::vector<PolicyTable> policies;
  for (;;) {
    PolicyTable policy(S, H);
    policy.actions.assign(odometer.begin(), odometer.end());
    values.push_back(policy_return(m, policy));
    policies.push_back(std::move(policy));

    std::size_t i = 0;
    while (i < cells) {
      if (++odometer[i] < m.num_actions) break;
      odometer[i] = 0;
      ++i;
    }
    if (i == cells) break;
  }

  auto kept = nondominated_indices(values);
  std::vector<ReturnSetEntry> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) {
    out.push_back(ReturnSetEntry{std::move(values[k]), std::move(policies[k])});
  }
  return out;
}

std::vector<ReturnSetEntry> enumerate_returns(const TabularMomdp& m,
                                              std::size_t cap) {
  auto violations = validate(m);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid instance: " + violations.front());
  }
  if (is_deterministic(m) && point_mass_state(m) >= 0) {
    return enumerate_deterministic(m);
  }
  return enumerate_returns_exhaustive(m, cap);
}

namespace {

constexpr int kDstRows = 11;
constexpr int kDstCols = 10;
constexpr int kDstDepth[kDstCols] = {1, 2, 3, 4, 4, 4, 7, 7, 9, 10};
constexpr double kDstTreasure[kDstCols] = {1, 2, 3, 5, 8, 16, 24, 50, 74, 124};

int dst_state(int row, int col) { return row * kDstCols + col; }

bool dst_is_ground(int row, int col) { return row > kDstDepth[col]; }

bool dst_is_treasure(int row, int col) { return row == kDstDepth[col]; }

}  // namespace

TabularMomdp dst_env() {
  TabularMomdp m;
  m.num_states = kDstRows * kDstCols;
  m.num_actions = 4;  // up, down, left, right
  m.num_objectives = 2;
  m.gamma = 1.0;
  m.horizon = 50;
  const std::size_t cells = static_cast<std::size_t>(m.num_states) *
                            m.num_actions * m.num_states;
  m.transitions.assign(cells, 0.0);
  m.rewards.assign(cells, ValueVec(2, 0.0));
  m.initial_dist.assign(m.num_states, 0.0);
  m.initial_dist[dst_state(0, 0)] = 1.0;

  const int drow[4] = {-1, 1, 0, 0};
  const int dcol[4] = {0, 0, -1, 1};

  for (int row = 0; row < kDstRows; ++row) {
    for (int col = 0; col < kDstCols; ++col) {
      int s = dst_state(row, col);
      if (dst_is_treasure(row, col)) m.terminal_states.insert(s);
      for (int a = 0; a < 4; ++a) {
        if (dst_is_ground(row, col) || dst_is_treasure(row, col)) {
          // Unreachable or terminal cells self-loop with zero reward.
          m.transitions[m.index(s, a, s)] = 1.0;
          continue;
        }
        int nrow = row + drow[a];
        int ncol = col + dcol[a];
        bool blocked = nrow < 0 || nrow >= kDstRows || ncol < 0 ||
                       ncol >= kDstCols || dst_is_ground(nrow, ncol);
        if (blocked) {
          nrow = row;
          ncol = col;
        }
        int sp = dst_state(nrow, ncol);
        m.transitions[m.index(s, a, sp)] = 1.0;
        ValueVec& r = m.rewards[m.index(s, a, sp)];
        r[0] = dst_is_treasure(nrow, ncol) ? kDstTreasure[ncol] : 0.0;
        r[1] = -1.0;
      }
    }
  }
  return m;
}

InitPoints dst_init_points() {
  InitPoints p;
  p.max_points = {{124.0, -50.0}, {1.0, -1.0}};
  p.min_points = {{0.0, -50.0}};
  return p;
}

InitPoints momdp_init_points(const TabularMomdp& m) {
  InitPoints p;
  for (int j = 0; j < m.num_objectives; ++j) {
    auto hi = scalar_value_iteration(m, j, Sense::Maximize);
    p.max_points.push_back(policy_return(m, hi.policy));
    auto lo = scalar_value_iteration(m, j, Sense::Minimize);
    p.min_points.push_back(policy_return(m, lo.policy));
  }
  return p;
}

}  // namespace modec
