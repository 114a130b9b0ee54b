// Acceptance suite: one self-contained check per release criterion, one
// pass/fail line each. Exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modec/commands.hpp"
#include "modec/engine.hpp"
#include "modec/io.hpp"
#include "modec/metrics.hpp"
#include "modec/momdp.hpp"
#include "modec/oracle.hpp"
#include "support.hpp"

using namespace modec;
using testsupport::canonical;
using testsupport::mc_hypervolume;
using testsupport::random_instance;
using testsupport::random_points;
using testsupport::RandomInstance;
using testsupport::values_of;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) {
      passed = false;
      detail = what;
    }
  }
};

int failures = 0;

void report(int id, const std::string& label, const Outcome& outcome) {
  if (outcome.passed) {
    std::cout << "[PASS] " << id << ": " << label << "\n";
  } else {
    std::cout << "[FAIL] " << id << ": " << label << " -- " << outcome.detail
              << "\n";
    ++failures;
  }
}

/// Smallest positive per-axis gap between coordinate values.
double min_coordinate_gap(const std::vector<ValueVec>& points) {
  double gap = std::numeric_limits<double>::infinity();
  std::size_t dims = points.front().size();
  for (std::size_t j = 0; j < dims; ++j) {
    std::vector<double> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(p[j]);
    std::sort(values.begin(), values.end());
    for (std::size_t i = 1; i < values.size(); ++i) {
      double diff = values[i] - values[i - 1];
      if (diff > 0.0) gap = std::min(gap, diff);
    }
  }
  return gap;
}

/// Criterion 1: the treasure grid run recovers the complete ten-point front
/// exactly, with the right endpoints, in well under a minute.
void criterion_dst() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();

  auto truth_entries = enumerate_returns(dst_env());
  std::vector<ValueVec> truth;
  for (auto& e : truth_entries) truth.push_back(e.value);

  auto init = dst_init_points();
  Engine engine(init.max_points, init.min_points, 0.0);
  SetOracle oracle(truth, AsfParams{default_lambda(engine.state().box), 0.01},
                   OracleMode::Approximate);
  auto result = engine.run(oracle, 1000);

  auto front = values_of(result.front);
  out.require(front.size() == 10, "front size != 10");
  out.require(canonical(front) == canonical(truth),
              "front differs from the enumerated truth");
  out.require(epsilon_error(front, truth) == 0.0, "epsilon != 0");
  out.require(result.error_bound == 0.0, "final bound != 0");
  auto has = [&](const ValueVec& v) {
    return std::find(front.begin(), front.end(), v) != front.end();
  };
  out.require(has({124, -19}) && has({1, -1}), "endpoints missing");

  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  out.require(seconds < 60.0, "took " + std::to_string(seconds) + "s");
  report(1, "treasure-grid run recovers the exact ten-point front", out);
}

struct PoolStats {
  std::int64_t bound_violations = 0;
  std::int64_t monotonicity_violations = 0;
  std::int64_t coverage_violations = 0;
  std::int64_t tau_violations = 0;
  std::int64_t budget_violations = 0;
  std::int64_t iterations = 0;
};

/// Criteria 2/3/5/6 share one pool of 200 instances whose tolerance sits
/// below every positive coordinate gap (and below the nadir offset), so
/// failed regions cannot hide feasible points inside their tolerance band
/// and every run resolves the full front.
PoolStats run_certified_pool() {
  PoolStats stats;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    int dims = 2 + static_cast<int>(seed % 3);
    RandomInstance inst = random_instance(rng, dims, false);
    std::uniform_real_distribution<double> frac(0.2, 0.8);
    inst.tolerance =
        frac(rng) * std::min(min_coordinate_gap(inst.points), 1e-6);

    Engine engine(inst.init.max_points, inst.init.min_points, inst.tolerance,
                  SelectionStrategy{}, seed);
    auto oracle = testsupport::instance_oracle(inst, engine.state());
    std::int64_t cap =
        worst_case_iterations(engine.state().box, inst.tolerance);

    double previous = std::numeric_limits<double>::infinity();
    auto result = engine.run(
        oracle, cap, [&](const StepInfo& info, const SearchState& s) {
          ++stats.iterations;
          double shift = shift_error(values_of(s.front), inst.truth);
          if (info.error_bound < shift - 1e-9) ++stats.bound_violations;
          if (info.error_bound > previous + 1e-12) {
            ++stats.monotonicity_violations;
          }
          previous = info.error_bound;

          for (const auto& x : inst.points) {
            bool dominated = false;
            bool excluded = false;
            for (const auto& fp : s.front) {
              if (weakly_dominates(fp.value, x)) dominated = true;
              if (weakly_dominates(x, fp.value)) excluded = true;
            }
            for (const auto& c : s.completed) {
              if (weakly_dominates(x, c)) excluded = true;
            }
            if (dominated || excluded) continue;
            bool lower_cover = false;
            bool upper_cover = false;
            for (const auto& l : s.lower) {
              if (strictly_dominates(x, l)) lower_cover = true;
            }
            for (const auto& u : s.upper) {
              if (weakly_dominates(u, x)) upper_cover = true;
            }
            if (!lower_cover || !upper_cover) ++stats.coverage_violations;
          }
        });

    if (result.iterations > cap) ++stats.budget_violations;
    auto front = values_of(result.front);
    for (const auto& t : inst.truth) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& a : front) nearest = std::min(nearest, linf_dist(t, a));
      if (nearest > inst.tolerance + 1e-12) ++stats.tau_violations;
    }
  }
  return stats;
}

/// Criterion 4: the iteration budget on tolerances where the cell count is
/// small enough to bite, plus the closed-form spot value.
void criterion_budget() {
  Outcome out;
  out.require(worst_case_iterations(BoundingBox({0, 0}, {4, 4}), 1.0) == 7,
              "spot value != 7");
  for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
    std::mt19937_64 rng(seed);
    int dims = 2 + static_cast<int>(seed % 3);
    RandomInstance inst = random_instance(rng, dims, true);
    Engine engine(inst.init.max_points, inst.init.min_points, inst.tolerance,
                  SelectionStrategy{}, seed);
    auto oracle = testsupport::instance_oracle(inst, engine.state());
    std::int64_t cap =
        worst_case_iterations(engine.state().box, inst.tolerance);
    auto result = engine.run(oracle, cap + 5);
    out.require(result.iterations <= cap, "iteration count exceeded the bound");
    out.require(result.termination != Termination::BudgetExhausted,
                "run failed to converge inside the bound");
  }
  report(4, "iteration counts stay within the worst-case budget", out);
}

/// Criterion 7: oracle contracts over ten thousand random queries.
void criterion_oracle_contracts() {
  Outcome out;
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> size(5, 40);
  const double tau = 0.1;
  for (int round = 0; round < 2500; ++round) {
    int dims = 2 + round % 3;
    auto feasible = random_points(rng, size(rng), dims);
    AsfParams weak_params{ValueVec(dims, 1.0), 0.0};
    AsfParams approx_params{ValueVec(dims, 1.0), 0.01};
    for (int q = 0; q < 2; ++q) {
      ValueVec referent = random_points(rng, 1, dims)[0];

      auto weak = set_oracle_query(feasible, {referent, 0.0}, weak_params,
                                   OracleMode::Weak);
      bool weak_exists = false;
      for (const auto& v : feasible) {
        if (strictly_dominates(v, referent)) weak_exists = true;
      }
      out.require(weak.success == weak_exists, "weak success flag wrong");
      if (weak.success) {
        out.require(strictly_dominates(*weak.value, referent),
                    "weak value does not strictly dominate the referent");
        for (const auto& v : feasible) {
          out.require(!strictly_dominates(v, *weak.value),
                      "weak value not weakly Pareto optimal");
        }
      }

      auto approx = set_oracle_query(feasible, {referent, tau}, approx_params,
                                     OracleMode::Approximate);
      ValueVec shifted = referent;
      for (double& x : shifted) x += tau;
      bool approx_exists = false;
      for (const auto& v : feasible) {
        if (weakly_dominates(v, shifted)) approx_exists = true;
      }
      out.require(approx.success == approx_exists,
                  "approximate success flag wrong");
      if (approx.success) {
        out.require(weakly_dominates(*approx.value, shifted),
                    "approximate value below referent + tau");
        for (const auto& v : feasible) {
          out.require(!pareto_dominates(v, *approx.value),
                      "approximate value not Pareto optimal");
        }
      }
    }
  }
  report(7, "oracle contracts hold over 10^4 random queries", out);
}

/// Criterion 8: scalarisation laws over 10^5 random pairs.
void criterion_asf_laws() {
  Outcome out;
  std::mt19937_64 rng(888);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  std::uniform_real_distribution<double> bump(1e-6, 1.0);
  for (int round = 0; round < 100000; ++round) {
    int dims = 2 + round % 3;
    AsfParams plain{ValueVec(dims), 0.0};
    for (double& w : plain.lambda) w = weight(rng);
    AsfParams augmented = plain;
    augmented.rho = 0.01;

    ValueVec r(dims), v(dims), w(dims);
    for (int j = 0; j < dims; ++j) {
      r[j] = coord(rng);
      v[j] = coord(rng);
      w[j] = coord(rng);
    }

    out.require((asf_chebyshev(v, r, plain) >= 0.0) == weakly_dominates(v, r),
                "sign law broken");
    out.require(asf_chebyshev(r, r, plain) == 0.0, "s_r(r) != 0 (plain)");
    out.require(asf_chebyshev(r, r, augmented) == 0.0,
                "s_r(r) != 0 (augmented)");

    ValueVec strict = w;
    for (double& x : strict) x += bump(rng);
    out.require(asf_chebyshev(strict, r, plain) > asf_chebyshev(w, r, plain),
                "strictly-increasing law broken");

    ValueVec pareto = w;
    pareto[round % dims] += bump(rng);
    out.require(
        asf_chebyshev(pareto, r, augmented) > asf_chebyshev(w, r, augmented),
        "strongly-increasing law broken");
  }
  report(8, "scalarisation laws hold over 10^5 random pairs", out);
}

/// Criterion 9: fault injection plus backtracking still lands on the exact
/// front, and every detected contradiction removes the contradicted point.
void criterion_backtracking() {
  Outcome out;
  int replays_seen = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    int dims = 2 + static_cast<int>(seed % 2);
    RandomInstance inst = random_instance(rng, dims, false, 5, 12);
    auto fresh = init_search(inst.init.max_points, inst.init.min_points, 0.0);
    AsfParams params{default_lambda(fresh.box), 0.01};

    Engine exact_engine(inst.init.max_points, inst.init.min_points, 0.0,
                        SelectionStrategy{}, seed);
    SetOracle exact(inst.points, params, OracleMode::Approximate);
    auto exact_result = exact_engine.run(exact, 100000);

    Engine noisy_engine(inst.init.max_points, inst.init.min_points, 0.0,
                        SelectionStrategy{}, seed);
    auto inner = std::make_shared<SetOracle>(inst.points, params,
                                             OracleMode::Approximate);
    NoisyOracle noisy(inner, inst.points, params, 0.2, seed * 7 + 1);

    std::size_t replays_before = 0;
    for (std::int64_t step = 0; step < 100000; ++step) {
      if (noisy_engine.state().upper.empty() ||
          noisy_engine.error_bound() <= 0.0) {
        break;
      }
      noisy_engine.step(noisy);
      if (noisy_engine.replays().size() > replays_before) {
        replays_before = noisy_engine.replays().size();
        ++replays_seen;
        const auto& event = noisy_engine.replays().back();
        auto now = values_of(noisy_engine.state().front);
        for (const auto& dropped : event.dropped_values) {
          out.require(std::find(now.begin(), now.end(), dropped) == now.end(),
                      "contradicted value survived its replay");
        }
        for (const auto& reopened : event.reopened_referents) {
          const auto& completed = noisy_engine.state().completed;
          out.require(std::find(completed.begin(), completed.end(),
                                reopened) == completed.end(),
                      "contradicted referent still marked complete");
        }
      }
    }

    out.require(canonical(values_of(noisy_engine.pareto_front())) ==
                    canonical(values_of(exact_result.front)),
                "noisy final front differs from the exact front");
  }
  out.require(replays_seen > 0, "no contradiction was ever exercised");
  report(9, "fault injection converges to the exact front via replays", out);
}

/// Criterion 10: the rectangle engine is step-identical to the general one
/// on bi-objective instances.
void criterion_rectangle_equivalence() {
  Outcome out;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed + 400);
    RandomInstance inst = random_instance(rng, 2, false);
    auto fresh = init_search(inst.init.max_points, inst.init.min_points, 0.0);
    auto oracle_a = testsupport::instance_oracle(inst, fresh);
    auto oracle_b = testsupport::instance_oracle(inst, fresh);

    Engine engine(inst.init.max_points, inst.init.min_points, 0.0,
                  SelectionStrategy{}, seed);
    auto general = engine.run(oracle_a, 1000000);
    auto rectangles =
        run_2d(fresh, SelectionStrategy{}, seed, oracle_b, 1000000);

    out.require(general.iterations == rectangles.iterations,
                "iteration counts differ");
    out.require(canonical(values_of(general.front)) ==
                    canonical(values_of(rectangles.front)),
                "fronts differ");
  }
  report(10, "rectangle and general engines match on 50 bi-objective runs",
         out);
}

/// Criterion 11: exact hypervolume against Monte Carlo and hand values.
void criterion_hypervolume() {
  Outcome out;
  out.require(hypervolume({{2, 1}, {1, 2}}, {0, 0}) == 3.0, "hand case != 3");
  out.require(hypervolume({{1, 1}}, {0, 0}) == 1.0, "unit square != 1");
  std::mt19937_64 rng(1111);
  for (int dims = 3; dims <= 4; ++dims) {
    for (int round = 0; round < 3; ++round) {
      auto front = random_points(rng, 20, dims, 1.0, 9.0);
      ValueVec ref(dims, 0.0);
      double exact = hypervolume(front, ref);
      auto estimate = mc_hypervolume(front, ref, 1000000, rng);
      out.require(std::abs(exact - estimate.mean) <=
                      3.0 * estimate.sigma + 1e-9,
                  "outside the 3-sigma Monte Carlo band");
    }
  }
  report(11, "exact hypervolume agrees with Monte Carlo quadrature", out);
}

/// Criterion 12: byte-identical logs from identical config and seed,
/// through the real command-line binary.
void criterion_determinism() {
  Outcome out;
#ifdef MODEC_CLI_PATH
  namespace fs = std::filesystem;
  std::mt19937_64 rng(std::random_device{}());
  fs::path base = fs::temp_directory_path() /
                  ("modec_acceptance_" + std::to_string(rng()));
  fs::create_directories(base);

  auto read_file = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  std::string logs[2];
  std::string fronts[2];
  for (int i = 0; i < 2; ++i) {
    fs::path out_dir = base / ("run" + std::to_string(i));
    nlohmann::json cfg;
    cfg["environment"] = "dst";
    cfg["oracle"] = "exact-approx";
    cfg["tolerance"] = 0.0;
    cfg["allow_zero_tolerance"] = true;
    cfg["budget"] = 500;
    cfg["seed"] = 42;
    cfg["output_dir"] = out_dir.string();
    fs::path cfg_path = base / ("config" + std::to_string(i) + ".json");
    std::ofstream(cfg_path) << cfg.dump(2);

    std::string command = std::string(MODEC_CLI_PATH) + " run --config " +
                          cfg_path.string() + " >/dev/null 2>&1";
    int code = std::system(command.c_str());
    out.require(code == 0, "cli run exited with " + std::to_string(code));
    logs[i] = read_file(out_dir / "run.jsonl");
    fronts[i] = read_file(out_dir / "front.csv");
  }
  out.require(!logs[0].empty(), "empty iteration log");
  out.require(logs[0] == logs[1], "iteration logs differ between runs");
  out.require(fronts[0] == fronts[1], "front files differ between runs");
#else
  out.require(false, "cli path not configured");
#endif
  report(12, "identical config and seed give byte-identical logs", out);
}

}  // namespace

int main() {
  criterion_dst();

  PoolStats pool = run_certified_pool();
  {
    Outcome out;
    out.require(pool.bound_violations == 0,
                std::to_string(pool.bound_violations) + " violations over " +
                    std::to_string(pool.iterations) + " iterations");
    report(2, "logged bound dominates the brute-force error on 200 runs", out);
  }
  {
    Outcome out;
    out.require(pool.monotonicity_violations == 0,
                std::to_string(pool.monotonicity_violations) + " increases");
    report(3, "error bounds are non-increasing on the same 200 runs", out);
  }
  criterion_budget();
  {
    Outcome out;
    out.require(pool.tau_violations == 0,
                std::to_string(pool.tau_violations) + " uncovered points");
    out.require(pool.budget_violations == 0, "budget exceeded in the pool");
    report(5, "every true point lies within tolerance of the result", out);
  }
  {
    Outcome out;
    out.require(pool.coverage_violations == 0,
                std::to_string(pool.coverage_violations) + " corner gaps");
    report(6, "remaining solutions stay bracketed by the corner sets", out);
  }
  criterion_oracle_contracts();
  criterion_asf_laws();
  criterion_backtracking();
  criterion_rectangle_equivalence();
  criterion_hypervolume();
  criterion_determinism();

  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
