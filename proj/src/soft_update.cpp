#include "pmitilt/soft_update.hpp"

#include <cmath>
#include <sstream>

#include "pmitilt/errors.hpp"
#include "pmitilt/numeric.hpp"

namespace pmitilt {

using numeric::kNegInf;

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    std::ostringstream msg;
    msg << "alpha must be finite and positive, got " << alpha;
    throw SpecError(msg.str());
  }
  if (!(tol >= 0.0)) throw SpecError("tolerance must be nonnegative");
}

SoftUpdateProblem::SoftUpdateProblem(DistVector prior, std::vector<double> reward,
                                     std::vector<double> terminal, SolverConfig config)
    : prior_(std::move(prior)),
      reward_(std::move(reward)),
      terminal_(std::move(terminal)),
      config_(config) {
  config_.validate();
  if (reward_.size() != prior_.size() || terminal_.size() != prior_.size()) {
    throw SpecError("reward and terminal vectors must align with the prior's outcomes");
  }
  for (std::size_t i = 0; i < prior_.size(); ++i) {
    if (prior_[i] == 0.0) continue;
    const double r = reward_[i];
    const double v = terminal_[i];
    if (std::isnan(r) || r == numeric::kInf) {
      throw SpecError("reward at outcome " + prior_.outcome(i).to_string() + " is not a real number");
    }
    if (!std::isfinite(v)) {
      throw SpecError("terminal value at outcome " + prior_.outcome(i).to_string() + " is not finite");
    }
  }
}

double SoftUpdateProblem::scaled_payoff(std::size_t i) const {
  if (prior_[i] == 0.0 || reward_[i] == kNegInf) return kNegInf;
  return config_.alpha * (reward_[i] + terminal_[i]);
}

namespace {

void require_same_space(const SoftUpdateProblem& problem, const DistVector& candidate) {
  if (candidate.size() != problem.prior().size()) {
    throw SpecError("candidate does not share the prior's outcome space");
  }
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (candidate[i] > 0.0 && problem.prior()[i] == 0.0) {
      throw SupportViolation("candidate charges outcome " + candidate.outcome(i).to_string() +
                             " which has zero prior mass");
    }
  }
}

}  // namespace

double objective_value(const SoftUpdateProblem& problem, const DistVector& candidate) {
  require_same_space(problem, candidate);
  const double inv_alpha = 1.0 / problem.alpha();
  const auto& p = problem.prior();
  numeric::CompensatedSum acc;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const double q = candidate[i];
    if (q == 0.0) continue;
    if (problem.reward()[i] == kNegInf) return kNegInf;
    acc.add(q * (problem.reward()[i] - inv_alpha * std::log(q / p[i]) + problem.terminal()[i]));
  }
  return acc.value();
}

SoftSolution solve_tilt(const SoftUpdateProblem& problem) {
  const auto& p = problem.prior();
  std::vector<double> log_weight(p.size(), kNegInf);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double payoff = problem.scaled_payoff(i);
    if (payoff != kNegInf) log_weight[i] = std::log(p[i]) + payoff;
  }
  const double log_z = numeric::log_sum_exp(log_weight);
  if (log_z == kNegInf) {
    throw DegenerateProblem("prior has no support with a finite payoff");
  }
  std::vector<double> opt(p.size(), 0.0);
  numeric::CompensatedSum total;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (log_weight[i] == kNegInf) continue;
    opt[i] = std::exp(log_weight[i] - log_z);
    total.add(opt[i]);
  }
  const double norm = total.value();
  for (double& q : opt) q /= norm;
  return SoftSolution{DistVector(p.over(), std::move(opt)), log_z / problem.alpha(), log_z};
}

double soft_value(const SoftUpdateProblem& problem) { return solve_tilt(problem).soft_value; }

double kl_divergence(const DistVector& q, const DistVector& p) {
  if (q.size() != p.size()) throw SpecError("kl_divergence: outcome spaces differ");
  numeric::CompensatedSum acc;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) return numeric::kInf;
    acc.add(q[i] * std::log(q[i] / p[i]));
  }
  return acc.value();
}

double kl_decomposition_residual(const SoftUpdateProblem& problem, const DistVector& candidate) {
  const double objective = objective_value(problem, candidate);
  const SoftSolution solution = solve_tilt(problem);
  // KL(q || optimizer) from log optimizer = log p + payoff - log Z, which
  // stays exact where the optimizer itself underflows.
  numeric::CompensatedSum kl;
  bool infinite = false;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const double q = candidate[i];
    if (q == 0.0) continue;
    const double payoff = problem.scaled_payoff(i);
    if (payoff == kNegInf) {
      infinite = true;
      break;
    }
    const double log_opt = std::log(problem.prior()[i]) + payoff - solution.log_normalizer;
    kl.add(q * (std::log(q) - log_opt));
  }
  if (infinite) return objective == kNegInf ? 0.0 : numeric::kInf;
  const double rhs = solution.soft_value - kl.value() / problem.alpha();
  return std::abs(objective - rhs);
}

}  // namespace pmitilt
