#include "pmitilt/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "pmitilt/errors.hpp"
#include "pmitilt/numeric.hpp"

namespace pmitilt {

using numeric::kNegInf;

SoftUpdateProblem build_swapped_problem(const DirectionPair& pair, const RewardTable& swapped_rewards,
                                        const Assignment& context) {
  if (!(swapped_rewards.direction == pair.swapped())) {
    throw CoverageMismatch("reward table is not in the swapped direction of the pair");
  }
  return build_problem(pair.joint, swapped_rewards, pair.values, pair.config, context);
}

double CommutativityResult::max_residual() const {
  double m = 0.0;
  for (const auto& [triple, r] : residual) m = std::max(m, r);
  return m;
}

namespace {

double context_value(const ContextValues& values, const Assignment& context) {
  const auto it = values.find(context);
  if (it == values.end()) throw CoverageMismatch("no context value for " + context.to_string());
  return it->second;
}

double max_of(const std::map<Assignment, double>& m) {
  double out = 0.0;
  for (const auto& [k, v] : m) out = std::max(out, v);
  return out;
}

}  // namespace

CommutativityResult commutativity_residual(const RewardTable& forward, const ContextValues& forward_values,
                                           const RewardTable& swapped, const ContextValues& swapped_values) {
  if (!(swapped.direction == forward.direction.swapped())) {
    throw CoverageMismatch("reward tables are not in swapped directions");
  }
  const Direction& sdir = swapped.direction;
  const NameList swapped_context_names = sdir.context_names();

  // Forward cells re-keyed by triple, then matched against the swapped table.
  std::map<Assignment, double> fwd_by_triple;
  std::map<Assignment, const CellKey*> fwd_keys;
  for (const auto& [key, r] : forward.entries) {
    const Assignment triple = key.context.merged(key.outcome);
    fwd_by_triple.emplace(triple, r);
    fwd_keys.emplace(triple, &key);
  }
  if (fwd_by_triple.size() != swapped.entries.size()) {
    throw CoverageMismatch("forward and swapped tables cover different numbers of triples");
  }

  CommutativityResult out;
  for (const auto& [skey, r_swp] : swapped.entries) {
    const Assignment triple = skey.context.merged(skey.outcome);
    const auto it = fwd_by_triple.find(triple);
    if (it == fwd_by_triple.end()) {
      throw CoverageMismatch("triple " + triple.to_string() + " is missing from the forward table");
    }
    const double r_fwd = it->second;
    if (r_fwd == kNegInf || r_swp == kNegInf) {
      out.skipped.push_back({triple, "posterior-null cell (-inf interaction)"});
      continue;
    }
    const double v_fwd = context_value(forward_values, fwd_keys.at(triple)->context);
    const double v_swp = context_value(swapped_values, triple.restricted(swapped_context_names));
    out.residual.emplace(triple, std::abs((r_fwd - v_fwd) - (r_swp - v_swp)));
  }
  return out;
}

double OrderIndependenceReport::max_identification() const {
  double m = 0.0;
  for (const auto& [c, v] : forward_identification) m = std::max(m, v);
  for (const auto& [c, v] : swapped_identification) m = std::max(m, v);
  return m;
}

double OrderIndependenceReport::max_symmetry() const { return max_of(symmetry); }

OrderIndependenceReport order_independence_check(const DirectionPair& pair, const RewardSplit& forward,
                                                 const RewardSplit& swapped, double tol) {
  OrderIndependenceReport report;
  report.tol = tol;

  const auto identification = [&](const RewardSplit& split, ContextValues& out) {
    const Direction& dir = split.rewards.direction;
    for (const auto& context : pair.joint.enumerate(dir.context_names())) {
      if (!(pair.joint.probability(context) > 0.0)) {
        report.skipped_contexts.push_back({context, "zero-mass context (" + dir.tag() + ")"});
        continue;
      }
      const SoftUpdateProblem problem = build_problem(pair.joint, split.rewards, pair.values, pair.config, context);
      const DistVector posterior = conditional(pair.joint, dir.updated(), context);
      out[context] = total_variation(solve_tilt(problem).optimizer, posterior);
    }
  };
  if (!(forward.rewards.direction == pair.forward) || !(swapped.rewards.direction == pair.swapped())) {
    throw CoverageMismatch("reward splits do not match the pair's directions");
  }
  identification(forward, report.forward_identification);
  identification(swapped, report.swapped_identification);

  const InteractionTable i_fwd = identify_interaction(pair.joint, pair.forward, pair.config.alpha);
  const InteractionTable i_swp = identify_interaction(pair.joint, pair.swapped(), pair.config.alpha);
  const NameList swapped_context_names = pair.swapped().context_names();
  for (const auto& [key, value] : i_fwd.values) {
    const Assignment triple = key.context.merged(key.outcome);
    const auto it = i_swp.values.find(CellKey{triple.restricted(swapped_context_names),
                                              triple.restricted(pair.swapped().updated())});
    if (it == i_swp.values.end()) {
      throw CoverageMismatch("swapped interaction is missing triple " + triple.to_string());
    }
    if (value == kNegInf && it->second == kNegInf) continue;
    report.symmetry.emplace(triple, std::abs(value - it->second));
  }

  report.commutativity = commutativity_residual(forward.rewards, forward.context_values, swapped.rewards,
                                                swapped.context_values);

  report.pass = report.max_identification() <= tol && report.max_symmetry() <= tol &&
                report.commutativity.max_residual() <= tol;
  return report;
}

}  // namespace pmitilt
