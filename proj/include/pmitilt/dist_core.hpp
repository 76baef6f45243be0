#pragma once
//
// Exact finite joint distributions over named discrete variables.
//
// A JointTable stores a dense, row-major mass vector over the product of its
// variables' alphabets (first variable slowest). Every marginal, conditional
// and pointwise mutual information value in the library is derived from one
// table, so all identities are checked against a single ambient joint.
//
// Variable groups are plain name lists; operations accept any subset of the
// table's variables and reorder them into table order internally.
//

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pmitilt {

// Input validation tolerance on total mass and on DistVector normalization.
inline constexpr double kTolNorm = 1e-12;

struct VariableSpec {
  std::string name;
  std::vector<std::string> alphabet;

  // Position of `label` in the alphabet; throws SpecError when absent.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

using NameList = std::vector<std::string>;

// A partial or full assignment of labels to variables. Bindings are kept
// sorted by variable name, which makes the representation canonical: two
// assignments listing the same pairs in different orders compare equal.
class Assignment {
 public:
  using Map = std::map<std::string, std::string, std::less<>>;

  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::string, std::string>> init);
  explicit Assignment(Map bindings) : bindings_(std::move(bindings)) {}

  // Binds `name`; throws SpecError if it is already bound to another label.
  void bind(std::string name, std::string label);

  bool contains(std::string_view name) const;
  const std::string& at(std::string_view name) const;

  // Union of two assignments; throws SpecError on conflicting labels.
  Assignment merged(const Assignment& other) const;
  // Bindings restricted to `names` (names missing here are ignored).
  Assignment restricted(std::span<const std::string> names) const;
  NameList names() const;

  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  const Map& bindings() const noexcept { return bindings_; }
  auto begin() const noexcept { return bindings_.begin(); }
  auto end() const noexcept { return bindings_.end(); }

  // "X=0,Y=1"
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment& a, const Assignment& b) {
    return a.bindings_ <=> b.bindings_;
  }

 private:
  Map bindings_;
};

// Probability vector over the alphabet product of a variable group. Outcome
// i corresponds to the row-major enumeration of `over` (first variable
// slowest).
class DistVector {
 public:
  DistVector() = default;
  DistVector(std::vector<VariableSpec> over, std::vector<double> probs,
             double tol_norm = kTolNorm);

  // Convenience for tests and one-off problems: a single variable "X" with
  // labels "0".."n-1".
  static DistVector over_indices(std::vector<double> probs,
                                 double tol_norm = kTolNorm);

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<VariableSpec>& over() const noexcept { return over_; }

  Assignment outcome(std::size_t i) const;
  std::size_t index_of(const Assignment& outcome) const;

  bool same_outcomes(const DistVector& other) const { return over_ == other.over_; }

 private:
  std::vector<VariableSpec> over_;
  std::vector<double> probs_;
};

double total_variation(const DistVector& a, const DistVector& b);

class JointTable {
 public:
  // `mass` is dense row-major over the product of `variables`. Masses must be
  // nonnegative and sum to 1 within `tol_norm`. A looser `tol_norm` (used by
  // the file loader) is accepted by rescaling with the compensated total, so
  // a stored table always sums to 1 within kTolNorm.
  JointTable(std::vector<VariableSpec> variables, std::vector<double> mass,
             double tol_norm = kTolNorm);

  // Sparse construction: omitted full assignments carry zero mass. Rejects
  // duplicate or partial assignments.
  static JointTable from_cells(std::vector<VariableSpec> variables,
                               const std::vector<std::pair<Assignment, double>>& cells,
                               double tol_norm = kTolNorm);

  const std::vector<VariableSpec>& variables() const noexcept { return variables_; }
  const VariableSpec& variable(std::string_view name) const;
  bool has_variable(std::string_view name) const;

  std::size_t cell_count() const noexcept { return mass_.size(); }
  std::span<const double> masses() const noexcept { return mass_; }
  Assignment cell(std::size_t flat_index) const;

  // Mass of a full assignment.
  double mass(const Assignment& full) const;
  // Probability of the event described by a (possibly partial) assignment:
  // the compensated sum of all matching cells in flat order.
  double probability(const Assignment& event) const;

  // Specs of `names` in table order; throws SpecError on unknown names or
  // duplicates.
  std::vector<VariableSpec> group(std::span<const std::string> names) const;
  // All assignments over `names`, row-major in table order.
  std::vector<Assignment> enumerate(std::span<const std::string> names) const;

  friend bool operator==(const JointTable&, const JointTable&) = default;

 private:
  void validate_event(const Assignment& event) const;

  std::vector<VariableSpec> variables_;
  std::vector<double> mass_;
  std::vector<std::size_t> strides_;
};

// Sums out every variable not in `keep`.
JointTable marginal(const JointTable& joint, std::span<const std::string> keep);
JointTable marginal(const JointTable& joint, std::initializer_list<std::string> keep);

// P(target | context) as an exactly renormalized slice. Throws
// ZeroMassContext when P(context) = 0.
DistVector conditional(const JointTable& joint, std::span<const std::string> target,
                       const Assignment& context);
DistVector conditional(const JointTable& joint, std::initializer_list<std::string> target,
                       const Assignment& context);

// Conditional pointwise mutual information log[P(x|y,z) / P(x|y)].
// Returns -inf when P(x|y,z) = 0 while P(x|y) > 0. Throws ZeroMassContext if
// P(y) = 0 or P(y,z) = 0 and UndefinedPMI if P(x|y) = 0. The value is
// computed from the four event probabilities in a form symmetric in x and z,
// so pmi(x;z|y) == pmi(z;x|y) bit for bit.
double pmi(const JointTable& joint, const Assignment& x, const Assignment& z,
           const Assignment& y);

}  // namespace pmitilt
