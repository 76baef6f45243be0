#pragma once
//
// Two update directions over one ambient joint: X given (Y, Z) and the
// swapped Z given (Y, X). With a single event-keyed value function the
// identified interactions must agree, which couples the two reward tables:
//
//   r_fwd(x | y) - V(y, z) = r_swp(z | y) - V(x, y)
//
// Everything here detects and reports violations; nothing projects reward
// tables onto the constraint.
//

#include <map>
#include <vector>

#include "pmitilt/dist_core.hpp"
#include "pmitilt/event_values.hpp"
#include "pmitilt/identification.hpp"
#include "pmitilt/soft_update.hpp"

namespace pmitilt {

struct DirectionPair {
  JointTable joint;
  EventValueFunction values;  // shared by both directions
  SolverConfig config;
  Direction forward = Direction::x_given_yz();

  Direction swapped() const { return forward.swapped(); }
};

// prior P(z | y), reward r_x(z | y), terminal V({x, y, z}) for context (y, x).
SoftUpdateProblem build_swapped_problem(const DirectionPair& pair, const RewardTable& swapped_rewards,
                                        const Assignment& context);

struct TripleSkip {
  Assignment triple;
  std::string reason;
};

struct CommutativityResult {
  std::map<Assignment, double> residual;  // keyed by the full (x, y, z) event
  std::vector<TripleSkip> skipped;
  double max_residual() const;
};

// |[r_fwd - V(fwd context)] - [r_swp - V(swp context)]| on every triple both
// tables define. Triples whose cell is -inf on either side are skipped.
// Throws CoverageMismatch if the directions are not swaps of each other or
// the tables (or context-value maps) do not cover the same triples.
CommutativityResult commutativity_residual(const RewardTable& forward, const ContextValues& forward_values,
                                           const RewardTable& swapped, const ContextValues& swapped_values);

struct OrderIndependenceReport {
  double tol = 0.0;
  // Total variation between the tilt optimizer and P(updated | context).
  ContextValues forward_identification;
  ContextValues swapped_identification;
  // |i(x;z|y) - i(z;x|y)| per finite triple.
  std::map<Assignment, double> symmetry;
  CommutativityResult commutativity;
  std::vector<SkippedContext> skipped_contexts;
  bool pass = false;

  double max_identification() const;
  double max_symmetry() const;
};

OrderIndependenceReport order_independence_check(const DirectionPair& pair, const RewardSplit& forward,
                                                 const RewardSplit& swapped, double tol = 1e-10);

}  // namespace pmitilt
