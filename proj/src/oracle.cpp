#include "modec/oracle.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace modec {

double asf_chebyshev(const ValueVec& v, const ValueVec& r,
                     const AsfParams& params) {
  require_same_dimension(v, r);
  require_same_dimension(v, params.lambda);
  if (params.rho < 0.0) {
    throw std::invalid_argument("asf augmentation strength must be >= 0");
  }
  double lowest = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(params.lambda[j] > 0.0)) {
      throw std::invalid_argument("asf weights must be positive");
    }
    double term = params.lambda[j] * (v[j] - r[j]);
    if (j == 0 || term < lowest) lowest = term;
    total += term;
  }
  return lowest + params.rho * total;
}

ValueVec default_lambda(const BoundingBox& box) {
  ValueVec lambda(box.dimensions());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    lambda[j] = 1.0 / (box.ideal[j] - box.nadir[j]);
  }
  return lambda;
}

namespace {

/// Argmax of the ASF over the elements of @p feasible whose index passes
/// @p admit, with ties broken toward the lexicographically largest vector.
/// Returns -1 when nothing is admitted.
template <typename Admit>
std::int64_t argmax_asf(const std::vector<ValueVec>& feasible,
                        const ValueVec& referent, const AsfParams& params,
                        Admit admit) {
  std::int64_t best = -1;
  double best_score = 0.0;
  for (std::size_t i = 0; i < feasible.size(); ++i) {
    if (!admit(i)) continue;
    double score = asf_chebyshev(feasible[i], referent, params);
    if (best < 0 || score > best_score ||
        (score == best_score && lex_less(feasible[best], feasible[i]))) {
      best = static_cast<std::int64_t>(i);
      best_score = score;
    }
  }
  return best;
}

OracleResponse respond(const std::vector<ValueVec>& feasible,
                       std::int64_t index, bool success) {
  OracleResponse resp;
  resp.success = success;
  if (success) {
    resp.value = feasible[index];
    resp.solution = index;
  }
  return resp;
}

}  // namespace

OracleResponse set_oracle_query(const std::vector<ValueVec>& feasible,
                                const OracleQuery& q, const AsfParams& params,
                                OracleMode mode) {
  if (feasible.empty()) {
    throw std::invalid_argument("oracle feasible set is empty");
  }
  if (q.tolerance < 0.0) {
    throw std::invalid_argument("oracle tolerance must be >= 0");
  }

  if (mode == OracleMode::Weak) {
    if (params.rho != 0.0) {
      throw std::invalid_argument("weak oracles use rho = 0");
    }
    std::int64_t best = argmax_asf(feasible, q.referent, params,
                                   [](std::size_t) { return true; });
    bool ok = strictly_dominates(feasible[best], q.referent);
    return respond(feasible, best, ok);
  }

  if (!(params.rho > 0.0)) {
    throw std::invalid_argument("approximate oracles use rho > 0");
  }
  ValueVec shifted = q.referent;
  for (double& x : shifted) x += q.tolerance;
  // Maximising inside the target region keeps failures exact: a miss proves
  // no feasible point reaches the region, and any dominator of an admitted
  // point is itself admitted, so the maximiser is Pareto optimal in the
  // whole set.
  std::int64_t best =
      q.tolerance > 0.0
          ? argmax_asf(feasible, shifted, params,
                       [&](std::size_t i) {
                         return weakly_dominates(feasible[i], shifted);
                       })
          : argmax_asf(feasible, shifted, params, [&](std::size_t i) {
              return strictly_dominates(feasible[i], q.referent);
            });
  return respond(feasible, best, best >= 0);
}

SetOracle::SetOracle(std::vector<ValueVec> feasible, AsfParams params,
                     OracleMode mode)
    : feasible_(std::move(feasible)), params_(std::move(params)), mode_(mode) {
  if (feasible_.empty()) {
    throw std::invalid_argument("oracle feasible set is empty");
  }
  for (const auto& v : feasible_) {
    require_valid_point(v);
    require_same_dimension(feasible_.front(), v);
  }
}

OracleResponse SetOracle::query(const OracleQuery& q) {
  return set_oracle_query(feasible_, q, params_, mode_);
}

PolicyEnumOracle::PolicyEnumOracle(const TabularMomdp& momdp, AsfParams params,
                                   OracleMode mode, std::size_t cap)
    : params_(std::move(params)), mode_(mode) {
  auto entries = enumerate_returns(momdp, cap);
  values_.reserve(entries.size());
  policies_.reserve(entries.size());
  for (auto& e : entries) {
    values_.push_back(std::move(e.value));
    policies_.push_back(std::move(e.policy));
  }
}

OracleResponse PolicyEnumOracle::query(const OracleQuery& q) {
  return set_oracle_query(values_, q, params_, mode_);
}

const PolicyTable& PolicyEnumOracle::policy(std::int64_t handle) const {
  if (handle < 0 || handle >= static_cast<std::int64_t>(policies_.size())) {
    throw std::out_of_range("unknown policy handle");
  }
  return policies_[static_cast<std::size_t>(handle)];
}

NoisyOracle::NoisyOracle(std::shared_ptr<ParetoOracle> inner,
                         std::vector<ValueVec> feasible, AsfParams params,
                         double p_fault, std::uint64_t seed)
    : inner_(std::move(inner)), feasible_(std::move(feasible)),
      params_(std::move(params)), p_fault_(p_fault), seed_(seed) {
  if (!(p_fault_ >= 0.0 && p_fault_ < 1.0)) {
    throw std::invalid_argument("p_fault must lie in [0, 1)");
  }
  pareto_optimal_.assign(feasible_.size(), true);
  for (std::size_t i = 0; i < feasible_.size(); ++i) {
    for (std::size_t k = 0; k < feasible_.size(); ++k) {
      if (k != i && pareto_dominates(feasible_[k], feasible_[i])) {
        pareto_optimal_[i] = false;
        break;
      }
    }
  }
}

OracleResponse NoisyOracle::query(const OracleQuery& q) {
  std::uint64_t index = query_index_++;
  OracleResponse resp = inner_->query(q);
  if (p_fault_ == 0.0) return resp;

  resp.exact = false;
  if (!resp.success) return resp;

  std::mt19937_64 rng(seed_ ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= p_fault_) {
    return resp;
  }

  ValueVec shifted = q.referent;
  for (double& x : shifted) x += q.tolerance;
  std::int64_t fault = argmax_asf(
      feasible_, shifted, params_, [&](std::size_t i) {
        return !pareto_optimal_[i] &&
               strictly_dominates(feasible_[i], q.referent);
      });
  if (fault < 0) return resp;  // no plausible bad answer; pass through

  resp.value = feasible_[fault];
  resp.solution = fault;
  return resp;
}

ExternalOracle::ExternalOracle(const std::string& command) {
  int to_pipe[2];
  int from_pipe[2];
  if (::pipe(to_pipe) != 0 || ::pipe(from_pipe) != 0) {
    throw std::runtime_error("failed to create oracle pipes");
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    throw std::runtime_error("failed to fork oracle process");
  }
  if (pid == 0) {
    ::dup2(to_pipe[0], STDIN_FILENO);
    ::dup2(from_pipe[1], STDOUT_FILENO);
    ::close(to_pipe[0]);
    ::close(to_pipe[1]);
    ::close(from_pipe[0]);
    ::close(from_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    ::_exit(127);
  }
  child_pid_ = pid;
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
  ::close(to_pipe[0]);
  ::close(from_pipe[1]);
}

ExternalOracle::~ExternalOracle() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (child_pid_ > 0) {
    int status = 0;
    ::waitpid(child_pid_, &status, 0);
  }
}

std::string ExternalOracle::read_line() {
  for (;;) {
    auto pos = read_buffer_.find('\n');
    if (pos != std::string::npos) {
      std::string line = read_buffer_.substr(0, pos);
      read_buffer_.erase(0, pos + 1);
      return line;
    }
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("external oracle read failed");
    }
    if (n == 0) {
      throw std::runtime_error("external oracle closed its output");
    }
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

OracleResponse ExternalOracle::query(const OracleQuery& q) {
  nlohmann::ordered_json request;
  request["referent"] = q.referent;
  request["tolerance"] = q.tolerance;
  std::string line = request.dump();
  line.push_back('\n');

  std::size_t sent = 0;
  while (sent < line.size()) {
    ssize_t n = ::write(to_child_, line.data() + sent, line.size() - sent);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("external oracle write failed");
    }
    sent += static_cast<std::size_t>(n);
  }

  nlohmann::json reply = nlohmann::json::parse(read_line());
  OracleResponse resp;
  resp.success = reply.at("success").get<bool>();
  if (resp.success) {
    resp.value = reply.at("value").get<ValueVec>();
  }
  resp.exact = reply.value("exact", true);
  return resp;
}

}  // namespace modec
