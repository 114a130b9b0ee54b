#include "modec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>

#include <json.hpp>

#include "modec/metrics.hpp"
#include "modec/oracle.hpp"

namespace modec {

namespace {

using nlohmann::ordered_json;

constexpr int kVerifyUtilityCount = 100;
constexpr double kAuditSlack = 1e-9;

struct Instance {
  InitPoints init;
  std::vector<ValueVec> feasible;  ///< achievable values (oracle + truth)
};

Instance build_instance(const RunConfig& cfg) {
  Instance inst;
  switch (cfg.environment) {
    case EnvironmentKind::Dst: {
      inst.init = dst_init_points();
      for (auto& entry : enumerate_returns(dst_env())) {
        inst.feasible.push_back(std::move(entry.value));
      }
      break;
    }
    case EnvironmentKind::MomdpFile: {
      TabularMomdp m = load_momdp(cfg.environment_path);
      inst.init = momdp_init_points(m);
      for (auto& entry : enumerate_returns(m)) {
        inst.feasible.push_back(std::move(entry.value));
      }
      break;
    }
    case EnvironmentKind::VectorsFile: {
      inst.feasible = load_vector_set(cfg.environment_path);
      inst.init = vector_set_init_points(inst.feasible);
      break;
    }
  }
  return inst;
}

std::shared_ptr<ParetoOracle> build_oracle(const RunConfig& cfg,
                                           const Instance& inst,
                                           const BoundingBox& box) {
  AsfParams params{default_lambda(box), cfg.rho};
  switch (cfg.oracle) {
    case OracleKind::ExactWeak:
      params.rho = 0.0;
      return std::make_shared<SetOracle>(inst.feasible, params,
                                         OracleMode::Weak);
    case OracleKind::ExactApprox:
      if (!(cfg.rho > 0.0)) {
        throw std::runtime_error("exact-approx needs rho > 0");
      }
      return std::make_shared<SetOracle>(inst.feasible, params,
                                         OracleMode::Approximate);
    case OracleKind::Noisy: {
      if (!(cfg.rho > 0.0)) {
        throw std::runtime_error("noisy oracle needs rho > 0");
      }
      auto inner = std::make_shared<SetOracle>(inst.feasible, params,
                                               OracleMode::Approximate);
      return std::make_shared<NoisyOracle>(inner, inst.feasible, params,
                                           cfg.noise_probability, cfg.seed);
    }
    case OracleKind::External:
      return std::make_shared<ExternalOracle>(cfg.external_command);
  }
  throw std::logic_error("unreachable oracle kind");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::Exhausted:
      return "exhausted";
    case Termination::BudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

std::vector<ValueVec> front_values(const std::vector<FrontPoint>& front) {
  std::vector<ValueVec> out;
  out.reserve(front.size());
  for (const auto& fp : front) out.push_back(fp.value);
  return out;
}

/// Replays canned responses in order; used to audit logs.
class ScriptedOracle : public ParetoOracle {
 public:
  explicit ScriptedOracle(std::vector<OracleResponse> script)
      : script_(std::move(script)) {}

  OracleResponse query(const OracleQuery&) override {
    if (next_ >= script_.size()) {
      throw std::runtime_error("log replay ran past the recorded responses");
    }
    return script_[next_++];
  }

 private:
  std::vector<OracleResponse> script_;
  std::size_t next_ = 0;
};

}  // namespace

int cmd_run(const RunConfig& cfg) {
  try {
    Instance inst = build_instance(cfg);
    SearchState initial = init_search(inst.init.max_points,
                                      inst.init.min_points, cfg.tolerance);
    auto oracle = build_oracle(cfg, inst, initial.box);
    std::int64_t budget =
        cfg.budget ? *cfg.budget
                   : worst_case_iterations(initial.box, cfg.tolerance);

    std::filesystem::path out_dir = resolve_output_dir(cfg);
    std::filesystem::create_directories(out_dir);
    std::ofstream log(out_dir / "run.jsonl");
    if (!log) {
      throw std::runtime_error("cannot write the iteration log");
    }

    FrontResult result;
    if (cfg.variant == EngineVariant::TwoDim) {
      if (initial.box.dimensions() != 2) {
        throw std::runtime_error("variant 2d needs a bi-objective instance");
      }
      if (cfg.oracle == OracleKind::Noisy) {
        throw std::runtime_error("variant 2d supports exact oracles only");
      }
      result = run_2d(initial, cfg.strategy, cfg.seed, *oracle, budget,
                      [&](const StepInfo2d& info) {
                        LogLine line;
                        line.t = info.t;
                        line.referent = info.referent;
                        line.success = info.response.success;
                        line.value = info.response.value;
                        line.error_bound = info.gap_error;
                        line.front_size =
                            static_cast<std::int64_t>(info.front_size);
                        line.lower_size =
                            static_cast<std::int64_t>(info.rectangle_count);
                        line.upper_size =
                            static_cast<std::int64_t>(info.rectangle_count);
                        log << log_line_json(line) << "\n";
                      });
    } else {
      Engine engine(inst.init.max_points, inst.init.min_points, cfg.tolerance,
                    cfg.strategy, cfg.seed);
      result = engine.run(*oracle, budget,
                          [&](const StepInfo& info, const SearchState&) {
                            LogLine line;
                            line.t = info.t;
                            line.referent = info.referent;
                            line.success = info.response.success;
                            line.value = info.response.value;
                            line.error_bound = info.error_bound;
                            line.front_size =
                                static_cast<std::int64_t>(info.front_size);
                            line.lower_size =
                                static_cast<std::int64_t>(info.lower_size);
                            line.upper_size =
                                static_cast<std::int64_t>(info.upper_size);
                            log << log_line_json(line) << "\n";
                          });
    }
    log.close();

    write_front_csv(out_dir / "front.csv", result.front);

    ordered_json summary;
    summary["termination"] = termination_name(result.termination);
    summary["iterations"] = result.iterations;
    summary["error_bound"] = result.error_bound;
    summary["front_size"] = result.front.size();
    summary["hypervolume"] =
        hypervolume(front_values(result.front), initial.box.nadir);
    summary["replays"] = result.replays.size();
    std::ofstream summary_out(out_dir / "summary.json");
    summary_out << summary.dump(2) << "\n";

    return result.termination == Termination::BudgetExhausted ? kExitBudget
                                                              : kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_verify(const RunConfig& cfg,
               const std::optional<std::filesystem::path>& truth_file) {
  try {
    Instance inst = build_instance(cfg);
    SearchState initial = init_search(inst.init.max_points,
                                      inst.init.min_points, cfg.tolerance);
    std::filesystem::path out_dir = resolve_output_dir(cfg);
    auto log_lines = read_log(out_dir / "run.jsonl");
    auto reported_front = read_front_csv(out_dir / "front.csv");

    std::vector<ValueVec> truth;
    if (truth_file) {
      truth = front_values(read_front_csv(*truth_file));
    } else {
      truth = pprune(inst.feasible);
    }

    double scale = 0.0;
    for (std::size_t j = 0; j < initial.box.dimensions(); ++j) {
      scale = std::max(scale, initial.box.ideal[j] - initial.box.nadir[j]);
    }
    const double slack = kAuditSlack * std::max(1.0, scale);

    bool audit_ok = true;
    std::vector<std::string> failures;
    std::int64_t checked = 0;
    auto fail = [&](std::int64_t t, const std::string& what) {
      audit_ok = false;
      if (failures.size() < 8) {
        failures.push_back("t=" + std::to_string(t) + ": " + what);
      }
    };
    auto check_line = [&](const LogLine& expected, const ValueVec& referent,
                          double bound, const std::vector<ValueVec>& front_now) {
      if (referent != expected.referent) {
        fail(expected.t, "selected referent differs from the log");
      } else if (!(std::abs(bound - expected.error_bound) <= slack)) {
        fail(expected.t, "replayed error bound differs from the log");
      } else {
        // The certified bound dominates the shift needed to cover any
        // undiscovered solution; regions closed by an approximate oracle may
        // additionally hide solutions within the tolerance itself.
        double shift = shift_error(front_now, truth);
        double budgeted = std::max(expected.error_bound, cfg.tolerance);
        if (!(budgeted >= shift - slack)) {
          fail(expected.t, "logged bound falls below the true error");
        }
      }
      ++checked;
    };

    std::vector<OracleResponse> script;
    script.reserve(log_lines.size());
    for (const auto& line : log_lines) {
      OracleResponse r;
      r.success = line.success;
      r.value = line.value;
      r.exact = false;  // replay must not enforce the exact-oracle contract
      script.push_back(std::move(r));
    }
    ScriptedOracle scripted(std::move(script));

    if (!log_lines.empty()) {
      if (cfg.variant == EngineVariant::TwoDim) {
        std::size_t i = 0;
        std::vector<ValueVec> front_now = front_values(initial.front);
        run_2d(initial, cfg.strategy, cfg.seed, scripted,
               static_cast<std::int64_t>(log_lines.size()),
               [&](const StepInfo2d& info) {
                 if (info.response.success) {
                   front_now.push_back(*info.response.value);
                 }
                 if (i < log_lines.size()) {
                   check_line(log_lines[i], info.referent, info.gap_error,
                              front_now);
                 }
                 ++i;
               });
        if (i != log_lines.size()) {
          fail(static_cast<std::int64_t>(i), "log length differs from replay");
        }
      } else {
        Engine engine(inst.init.max_points, inst.init.min_points,
                      cfg.tolerance, cfg.strategy, cfg.seed);
        std::size_t i = 0;
        try {
          while (i < log_lines.size() && !engine.finished()) {
            IterationRecord rec = engine.step(scripted);
            check_line(log_lines[i], rec.referent, rec.error_bound_after,
                       front_values(engine.state().front));
            ++i;
          }
          if (i != log_lines.size()) {
            fail(static_cast<std::int64_t>(i),
                 "log continues past the replay's termination");
          }
        } catch (const std::exception& e) {
          fail(static_cast<std::int64_t>(i),
               std::string("replay error: ") + e.what());
        }
      }
    }

    auto reported_values = front_values(reported_front);
    double eps_final = reported_values.empty()
                           ? std::numeric_limits<double>::infinity()
                           : epsilon_error(reported_values, truth);
    auto utilities =
        generate_utilities(initial.box, kVerifyUtilityCount, cfg.seed);
    double mul = reported_values.empty()
                     ? std::numeric_limits<double>::infinity()
                     : max_utility_loss(reported_values, truth, utilities);

    ordered_json report;
    report["epsilon"] = eps_final;
    report["mul"] = mul;
    report["iterations_checked"] = checked;
    report["audit_passed"] = audit_ok;
    if (!audit_ok) report["failures"] = failures;
    std::cout << report.dump(2) << "\n";
    return audit_ok ? kExitOk : kExitAuditFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_metrics(const std::filesystem::path& front_file, const ValueVec& ref,
                const std::optional<std::filesystem::path>& truth_file,
                int utility_count, std::uint64_t seed) {
  try {
    require_valid_point(ref);
    auto front = front_values(read_front_csv(front_file));

    ordered_json report;
    report["hypervolume"] = hypervolume(front, ref);

    if (truth_file) {
      auto truth = front_values(read_front_csv(*truth_file));
      report["epsilon"] = epsilon_error(front, truth);

      // Utility domain: the tight box around both fronts, widened where an
      // axis would otherwise be flat.
      ValueVec lo = ref;
      ValueVec hi = ref;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        lo[j] = hi[j] = truth.front()[j];
      }
      for (const auto& set : {front, truth}) {
        for (const auto& p : set) {
          require_same_dimension(ref, p);
          for (std::size_t j = 0; j < p.size(); ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
          }
        }
      }
      for (std::size_t j = 0; j < lo.size(); ++j) {
        if (!(hi[j] > lo[j])) {
          lo[j] -= 0.5;
          hi[j] += 0.5;
        }
      }
      auto utilities =
          generate_utilities(BoundingBox(lo, hi), utility_count, seed);
      report["mul"] = max_utility_loss(front, truth, utilities);
    }

    std::cout << report.dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace modec
