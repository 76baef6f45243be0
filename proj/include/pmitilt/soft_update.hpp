#pragma once

#include <vector>

#include "pmitilt/dist_core.hpp"

namespace pmitilt {

struct SolverConfig {
  double alpha = 1.0;  // inverse temperature, > 0
  double tol = 1e-12;

  // Throws SpecError unless alpha is finite and positive and tol >= 0.
  void validate() const;
};

// One context slice of the KL-regularized update: maximize over q << prior
//   sum_x q(x) [ reward(x) - (1/alpha) log(q(x)/prior(x)) + terminal(x) ].
//
// reward/terminal are aligned with prior's outcome order. Values at outcomes
// outside the prior's support are ignored. On the support they may not be NaN
// or +inf; a reward of -inf marks an excluded outcome whose tilt weight is 0
// (this is how posterior-null cells from calibration are carried).
class SoftUpdateProblem {
 public:
  SoftUpdateProblem(DistVector prior, std::vector<double> reward, std::vector<double> terminal,
                    SolverConfig config);

  const DistVector& prior() const noexcept { return prior_; }
  const std::vector<double>& reward() const noexcept { return reward_; }
  const std::vector<double>& terminal() const noexcept { return terminal_; }
  const SolverConfig& config() const noexcept { return config_; }
  double alpha() const noexcept { return config_.alpha; }

  // alpha * (reward(i) + terminal(i)); -inf off the prior's support.
  double scaled_payoff(std::size_t i) const;

 private:
  DistVector prior_;
  std::vector<double> reward_;
  std::vector<double> terminal_;
  SolverConfig config_;
};

struct SoftSolution {
  DistVector optimizer;
  double soft_value = 0.0;      // log_normalizer / alpha
  double log_normalizer = 0.0;  // log sum_x p(x) exp{alpha [r(x) + V(x)]}
};

// Throws SupportViolation if `candidate` has mass where the prior has none.
double objective_value(const SoftUpdateProblem& problem, const DistVector& candidate);

// Closed-form maximizer. Throws DegenerateProblem when no outcome carries
// positive prior mass with a finite payoff.
SoftSolution solve_tilt(const SoftUpdateProblem& problem);

double soft_value(const SoftUpdateProblem& problem);

// KL(q || p) with 0 log 0 = 0; +inf when q charges an atom p does not.
double kl_divergence(const DistVector& q, const DistVector& p);

// |J(q) - [soft_value - KL(q || optimizer) / alpha]|. Zero in exact
// arithmetic for every admissible q. When both sides are -inf (q charges an
// excluded outcome) the residual is 0.
double kl_decomposition_residual(const SoftUpdateProblem& problem, const DistVector& candidate);

}  // namespace pmitilt
