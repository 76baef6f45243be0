#include "pmitilt/identification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "pmitilt/errors.hpp"
#include "pmitilt/numeric.hpp"

namespace pmitilt {

using numeric::kInf;
using numeric::kNegInf;

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Direction
// ---------------------------------------------------------------------------

Direction::Direction(NameList updated, NameList base, NameList observed)
    : updated_(std::move(updated)), base_(std::move(base)), observed_(std::move(observed)) {
  if (updated_.empty() || observed_.empty()) {
    throw SpecError("direction needs non-empty updated and observed groups");
  }
  std::set<std::string> seen;
  for (auto* group : {&updated_, &base_, &observed_}) {
    std::sort(group->begin(), group->end());
    for (const auto& n : *group) {
      if (!seen.insert(n).second) throw SpecError("variable " + n + " appears twice in a direction");
    }
  }
}

Direction Direction::x_given_yz() { return Direction({"X"}, {"Y"}, {"Z"}); }
Direction Direction::z_given_yx() { return Direction({"Z"}, {"Y"}, {"X"}); }

Direction Direction::from_tag(std::string_view tag) {
  if (tag == "x_given_yz") return x_given_yz();
  if (tag == "z_given_yx") return z_given_yx();
  throw SpecError("unknown direction tag '" + std::string(tag) + "'");
}

NameList Direction::context_names() const {
  NameList out = base_;
  out.insert(out.end(), observed_.begin(), observed_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string Direction::tag() const {
  if (*this == x_given_yz()) return "x_given_yz";
  if (*this == z_given_yx()) return "z_given_yx";
  return {};
}

// ---------------------------------------------------------------------------
// GaugeShift
// ---------------------------------------------------------------------------

GaugeShift GaugeShift::uniform(double c) {
  if (!std::isfinite(c)) throw SpecError("gauge shift must be finite");
  GaugeShift g;
  g.uniform_ = c;
  return g;
}

void GaugeShift::set(const Assignment& context, double c) {
  if (!std::isfinite(c)) throw SpecError("gauge shift for " + context.to_string() + " is not finite");
  entries_[context] = c;
}

bool GaugeShift::covers(const Assignment& context) const {
  return uniform_.has_value() || entries_.count(context) != 0;
}

double GaugeShift::at(const Assignment& context) const {
  const auto it = entries_.find(context);
  if (it != entries_.end()) return it->second;
  if (uniform_) return *uniform_;
  throw CoverageMismatch("gauge shift has no value for context " + context.to_string());
}

// ---------------------------------------------------------------------------
// Identification and calibration
// ---------------------------------------------------------------------------

std::vector<Assignment> contexts_of(const CellMap& cells) {
  std::vector<Assignment> out;
  for (const auto& [key, value] : cells) {
    if (out.empty() || out.back() != key.context) out.push_back(key.context);
  }
  return out;
}

InteractionTable identify_interaction(const JointTable& joint, const Direction& direction, double alpha) {
  SolverConfig{alpha}.validate();
  InteractionTable table;
  table.direction = direction;
  const auto outcomes = joint.enumerate(direction.updated());
  for (const auto& context : joint.enumerate(direction.context_names())) {
    if (!(joint.probability(context) > 0.0)) {
      table.skipped.push_back({context, "zero-mass context"});
      continue;
    }
    const Assignment y = context.restricted(direction.base());
    const Assignment z = context.restricted(direction.observed());
    for (const auto& x : outcomes) {
      if (!(joint.probability(y.merged(x)) > 0.0)) continue;  // outside P(x|y) support
      table.values.emplace(CellKey{context, x}, pmi(joint, x, z, y));
    }
  }
  return table;
}

Calibration calibrate_rewards(const JointTable& joint, const EventValueFunction& terminal, double alpha,
                              const GaugeShift& baseline, const Direction& direction,
                              InfiniteCells infinite) {
  const InteractionTable interaction = identify_interaction(joint, direction, alpha);
  Calibration out;
  out.rewards.direction = direction;
  out.rewards.convention = baseline.uniform_value() && baseline.entries().empty()
                               ? "uniform baseline K = " + format_number(*baseline.uniform_value())
                               : "per-context baseline K(context)";
  for (const auto& context : contexts_of(interaction.values)) {
    out.context_values[context] = baseline.at(context);
  }
  for (const auto& [key, i] : interaction.values) {
    if (i == kNegInf) {
      if (infinite == InfiniteCells::Reject) {
        throw InfiniteInteraction("interaction is -inf at context " + key.context.to_string() + ", outcome " +
                                  key.outcome.to_string() + "; no finite reward reproduces it");
      }
      out.rewards.entries.emplace(key, kNegInf);
      out.excluded.push_back(key);
      continue;
    }
    const double v = terminal.at(key.context.merged(key.outcome));
    out.rewards.entries.emplace(key, i / alpha - v + baseline.at(key.context));
  }
  return out;
}

RewardSplit apply_gauge(const RewardSplit& split, const GaugeShift& shift) {
  RewardSplit out;
  out.rewards.direction = split.rewards.direction;
  out.rewards.convention = split.rewards.convention;
  for (const auto& [key, r] : split.rewards.entries) {
    out.rewards.entries.emplace(key, r + shift.at(key.context));
  }
  for (const auto& [context, v] : split.context_values) {
    out.context_values.emplace(context, v + shift.at(context));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gauge comparison
// ---------------------------------------------------------------------------

namespace {

struct ContextSlice {
  Assignment context;
  std::vector<CellKey> cells;
};

std::vector<ContextSlice> slices(const CellMap& cells) {
  std::vector<ContextSlice> out;
  for (const auto& [key, value] : cells) {
    if (out.empty() || out.back().context != key.context) out.push_back({key.context, {}});
    out.back().cells.push_back(key);
  }
  return out;
}

}  // namespace

GaugeComparison gauge_equivalent(const RewardTable& a, const EventValueFunction& terminal_a,
                                 const RewardTable& b, const EventValueFunction& terminal_b, double tol) {
  if (!(a.direction == b.direction)) throw CoverageMismatch("gauge comparison across different directions");
  if (a.entries.size() != b.entries.size() ||
      !std::equal(a.entries.begin(), a.entries.end(), b.entries.begin(),
                  [](const auto& l, const auto& r) { return l.first == r.first; })) {
    throw CoverageMismatch("reward tables do not cover the same cells");
  }

  GaugeComparison out;
  out.equivalent = true;
  for (const auto& slice : slices(a.entries)) {
    // d(x) = [r_b + V_b] - [r_a + V_a]. A cell finite on one side only breaks
    // equivalence outright.
    std::vector<double> d;
    std::vector<const CellKey*> keys;
    bool broken = false;
    const CellKey* broken_key = nullptr;
    for (const auto& key : slice.cells) {
      const double ra = a.entries.at(key);
      const double rb = b.entries.at(key);
      if (ra == kNegInf && rb == kNegInf) continue;
      if (ra == kNegInf || rb == kNegInf) {
        broken = true;
        broken_key = &key;
        continue;
      }
      const Assignment event = key.context.merged(key.outcome);
      d.push_back((rb + terminal_b.at(event)) - (ra + terminal_a.at(event)));
      keys.push_back(&key);
    }

    double c = 0.0;
    double deviation = 0.0;
    const CellKey* worst = nullptr;
    if (!d.empty()) {
      std::size_t best = 0;
      std::size_t best_count = 0;
      for (std::size_t k = 0; k < d.size(); ++k) {
        const auto count = static_cast<std::size_t>(
            std::count_if(d.begin(), d.end(), [&](double v) { return std::abs(v - d[k]) <= tol; }));
        if (count > best_count) {
          best = k;
          best_count = count;
        }
      }
      c = d[best];
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double dev = std::abs(d[k] - c);
        if (worst == nullptr || dev > deviation) {
          deviation = dev;
          worst = keys[k];
        }
      }
    }
    if (broken) {
      deviation = kInf;
      worst = broken_key;
    }
    out.shift[slice.context] = c;
    out.deviation[slice.context] = deviation;
    if (worst != nullptr && (!out.worst || deviation > out.max_deviation)) {
      out.worst = *worst;
      out.max_deviation = deviation;
    }
    if (deviation > tol) out.equivalent = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Admissibility and construction
// ---------------------------------------------------------------------------

double AdmissibilityReport::max_residual() const {
  double m = 0.0;
  for (const auto& [context, r] : residual) m = std::max(m, r);
  return m;
}

AdmissibilityReport check_admissibility(const InteractionTable& interaction, const JointTable& joint) {
  AdmissibilityReport report;
  const Direction& dir = interaction.direction;
  for (const auto& slice : slices(interaction.values)) {
    const Assignment y = slice.context.restricted(dir.base());
    if (!(joint.probability(slice.context) > 0.0)) {
      report.skipped.push_back({slice.context, "zero-mass context"});
      continue;
    }
    const DistVector prior = conditional(joint, dir.updated(), y);
    std::vector<double> log_terms;
    bool missing = false;
    for (std::size_t k = 0; k < prior.size(); ++k) {
      if (prior[k] == 0.0) continue;
      const auto it = interaction.values.find(CellKey{slice.context, prior.outcome(k)});
      if (it == interaction.values.end()) {
        missing = true;
        break;
      }
      log_terms.push_back(std::log(prior[k]) + it->second);
    }
    report.residual[slice.context] = missing ? kInf : std::abs(numeric::log_sum_exp(log_terms));
  }
  return report;
}

DistVector construct_posterior(const DistVector& prior, std::span<const double> interaction, double tol_admit) {
  if (interaction.size() != prior.size()) {
    throw SpecError("interaction vector does not align with the prior's outcomes");
  }
  std::vector<double> log_terms(prior.size(), kNegInf);
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (prior[k] == 0.0) continue;
    if (std::isnan(interaction[k]) || interaction[k] == kInf) {
      throw InadmissibleSignal("interaction at outcome " + prior.outcome(k).to_string() + " is not a real number");
    }
    log_terms[k] = std::log(prior[k]) + interaction[k];
  }
  const double log_norm = numeric::log_sum_exp(log_terms);
  const double residual = std::abs(log_norm);
  if (!(residual <= tol_admit)) {
    throw InadmissibleSignal("interaction does not normalize against the prior: |log sum| = " +
                             std::to_string(residual));
  }
  std::vector<double> post(prior.size(), 0.0);
  numeric::CompensatedSum total;
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (log_terms[k] == kNegInf) continue;
    post[k] = prior[k] * std::exp(interaction[k]);
    total.add(post[k]);
  }
  const double norm = total.value();
  for (double& p : post) p /= norm;
  return DistVector(prior.over(), std::move(post));
}

// ---------------------------------------------------------------------------
// Problem assembly
// ---------------------------------------------------------------------------

SoftUpdateProblem build_problem(const JointTable& joint, const RewardTable& rewards,
                                const EventValueFunction& terminal, const SolverConfig& config,
                                const Assignment& context) {
  const Direction& dir = rewards.direction;
  if (context.names() != dir.context_names()) {
    throw SpecError("context " + context.to_string() + " does not match the direction's context groups");
  }
  if (!(joint.probability(context) > 0.0)) {
    throw ZeroMassContext("context " + context.to_string() + " has zero probability");
  }
  DistVector prior = conditional(joint, dir.updated(), context.restricted(dir.base()));
  std::vector<double> reward(prior.size(), 0.0);
  std::vector<double> term(prior.size(), 0.0);
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (prior[k] == 0.0) continue;
    const Assignment outcome = prior.outcome(k);
    const auto it = rewards.entries.find(CellKey{context, outcome});
    if (it == rewards.entries.end()) {
      throw CoverageMismatch("no reward for context " + context.to_string() + ", outcome " + outcome.to_string());
    }
    reward[k] = it->second;
    const Assignment event = context.merged(outcome);
    if (it->second == kNegInf) {
      term[k] = terminal.find(event).value_or(0.0);
    } else {
      term[k] = terminal.at(event);
    }
  }
  return SoftUpdateProblem(std::move(prior), std::move(reward), std::move(term), config);
}

InteractionTable implied_interaction(const RewardSplit& split, const EventValueFunction& terminal, double alpha) {
  SolverConfig{alpha}.validate();
  InteractionTable out;
  out.direction = split.rewards.direction;
  for (const auto& [key, r] : split.rewards.entries) {
    if (r == kNegInf) {
      out.values.emplace(key, kNegInf);
      continue;
    }
    const auto v_ctx = split.context_values.find(key.context);
    if (v_ctx == split.context_values.end()) {
      throw CoverageMismatch("no context value for " + key.context.to_string());
    }
    out.values.emplace(key, alpha * (r + terminal.at(key.context.merged(key.outcome)) - v_ctx->second));
  }
  return out;
}

}  // namespace pmitilt
