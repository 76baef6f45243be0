#pragma once
//
// Posterior identification: the interaction pinned by a joint table, reward
// calibration under a baseline convention, gauge shifts, admissibility of
// PMI-shaped signals, and posterior construction from such signals.
//
// Terminology, for an update of X given (Y, Z):
//   context  (y, z)  -- assignment to base ∪ observed
//   outcome  x       -- assignment to the updated group
//   interaction i(x;z|y) = log P(x|y,z) - log P(x|y)
//                        = alpha [r(x|y) + V(x,y,z) - V(y,z)]
//

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmitilt/dist_core.hpp"
#include "pmitilt/event_values.hpp"
#include "pmitilt/soft_update.hpp"

namespace pmitilt {

// Admissibility tolerance for externally supplied interaction signals.
inline constexpr double kTolAdmit = 1e-8;

// Which group is updated, given which context. Group name lists are kept
// sorted; the three groups must be pairwise disjoint, updated and observed
// must be non-empty.
class Direction {
 public:
  Direction(NameList updated, NameList base, NameList observed);

  // X | (Y, Z) and Z | (Y, X) over variables literally named X, Y, Z.
  static Direction x_given_yz();
  static Direction z_given_yx();
  // Parses "x_given_yz" / "z_given_yx"; throws SpecError otherwise.
  static Direction from_tag(std::string_view tag);

  const NameList& updated() const noexcept { return updated_; }
  const NameList& base() const noexcept { return base_; }
  const NameList& observed() const noexcept { return observed_; }
  // base ∪ observed, sorted.
  NameList context_names() const;

  // Update of the observed group given (base, updated).
  Direction swapped() const { return Direction(observed_, base_, updated_); }

  // "x_given_yz" / "z_given_yx" for the standard groups, empty otherwise.
  std::string tag() const;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  NameList updated_;
  NameList base_;
  NameList observed_;
};

struct CellKey {
  Assignment context;
  Assignment outcome;

  friend bool operator==(const CellKey&, const CellKey&) = default;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

using CellMap = std::map<CellKey, double>;
using ContextValues = std::map<Assignment, double>;

struct SkippedContext {
  Assignment context;
  std::string reason;
};

// Interaction values on positive-mass contexts, one cell per outcome in the
// support of P(x|y). -inf marks outcomes with P(x|y,z) = 0.
struct InteractionTable {
  Direction direction = Direction::x_given_yz();
  CellMap values;
  std::vector<SkippedContext> skipped;
};

struct RewardTable {
  Direction direction = Direction::x_given_yz();
  CellMap entries;  // -inf marks an excluded (posterior-null) outcome
  std::string convention;
};

// A reward table together with the context values V(context) it is paired
// with. The gauge acts on both.
struct RewardSplit {
  RewardTable rewards;
  ContextValues context_values;
};

struct Calibration : RewardSplit {
  std::vector<CellKey> excluded;  // -inf interaction cells
};

// Context-only shift c(context).
class GaugeShift {
 public:
  GaugeShift() = default;
  static GaugeShift uniform(double c);

  void set(const Assignment& context, double c);
  bool covers(const Assignment& context) const;
  // Throws CoverageMismatch for contexts without a shift.
  double at(const Assignment& context) const;

  const ContextValues& entries() const noexcept { return entries_; }
  const std::optional<double>& uniform_value() const noexcept { return uniform_; }

 private:
  ContextValues entries_;
  std::optional<double> uniform_;
};

enum class InfiniteCells {
  Exclude,  // keep the cell as a -inf reward and list it in Calibration::excluded
  Reject,   // throw InfiniteInteraction
};

// Interaction table of the joint for `direction`. Independent of alpha; the
// argument is only validated so callers can pass their configured value.
InteractionTable identify_interaction(const JointTable& joint, const Direction& direction,
                                      double alpha = 1.0);

// r(x|context) = i/alpha - V(context ∪ x) + K(context), V(context) = K(context).
Calibration calibrate_rewards(const JointTable& joint, const EventValueFunction& terminal,
                              double alpha, const GaugeShift& baseline,
                              const Direction& direction = Direction::x_given_yz(),
                              InfiniteCells infinite = InfiniteCells::Exclude);

// r -> r + c(context), V(context) -> V(context) + c(context).
RewardSplit apply_gauge(const RewardSplit& split, const GaugeShift& shift);

struct GaugeComparison {
  bool equivalent = false;
  double max_deviation = 0.0;
  std::optional<CellKey> worst;  // cell with the largest deviation
  ContextValues shift;           // recovered c with b = a + c, per context
  ContextValues deviation;       // per-context max deviation from c
};

// Compares r + V(context ∪ x) across outcomes, context by context. Within a
// context the reference offset is the one shared by the most outcomes (ties:
// first outcome in order); an outcome deviating from it by more than `tol`
// breaks equivalence. Throws CoverageMismatch when the tables differ in
// direction, contexts or outcomes.
GaugeComparison gauge_equivalent(const RewardTable& a, const EventValueFunction& terminal_a,
                                 const RewardTable& b, const EventValueFunction& terminal_b,
                                 double tol);

struct AdmissibilityReport {
  ContextValues residual;  // |log sum_x P(x|y) exp{i}| per context
  std::vector<SkippedContext> skipped;
  double max_residual() const;
};

// Cells missing for a support outcome make that context's residual +inf.
AdmissibilityReport check_admissibility(const InteractionTable& interaction, const JointTable& joint);

// prior(x) exp{i(x)}, renormalized. Throws InadmissibleSignal when
// |log sum_x prior(x) exp{i(x)}| > tol_admit.
DistVector construct_posterior(const DistVector& prior, std::span<const double> interaction,
                               double tol_admit = kTolAdmit);

// Soft-update problem for one context: prior P(updated | base), rewards from
// the table, terminals V(context ∪ outcome). Throws ZeroMassContext when the
// context has no mass and CoverageMismatch when a support outcome has no
// reward.
SoftUpdateProblem build_problem(const JointTable& joint, const RewardTable& rewards,
                                const EventValueFunction& terminal, const SolverConfig& config,
                                const Assignment& context);

// alpha [r + V(context ∪ x) - V(context)] for every cell of the split.
InteractionTable implied_interaction(const RewardSplit& split, const EventValueFunction& terminal,
                                     double alpha);

// Contexts present in a cell map, in order.
std::vector<Assignment> contexts_of(const CellMap& cells);

}  // namespace pmitilt
