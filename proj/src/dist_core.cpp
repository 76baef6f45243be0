#include "pmitilt/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pmitilt/errors.hpp"
#include "pmitilt/numeric.hpp"

namespace pmitilt {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Spec: return "SpecError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::ZeroMassContext: return "ZeroMassContext";
    case ErrorKind::UndefinedPMI: return "UndefinedPMI";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::DegenerateProblem: return "DegenerateProblem";
    case ErrorKind::InfiniteInteraction: return "InfiniteInteraction";
    case ErrorKind::InadmissibleSignal: return "InadmissibleSignal";
    case ErrorKind::CoverageMismatch: return "CoverageMismatch";
    case ErrorKind::InvalidBounds: return "InvalidBounds";
    case ErrorKind::NotFinite: return "NotFinite";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// VariableSpec / Assignment
// ---------------------------------------------------------------------------

std::size_t VariableSpec::index_of(std::string_view label) const {
  const auto it = std::find(alphabet.begin(), alphabet.end(), label);
  if (it == alphabet.end()) {
    throw SpecError("label '" + std::string(label) + "' is not in the alphabet of " + name);
  }
  return static_cast<std::size_t>(it - alphabet.begin());
}

Assignment::Assignment(std::initializer_list<std::pair<const std::string, std::string>> init) {
  for (const auto& [name, label] : init) bind(name, label);
}

void Assignment::bind(std::string name, std::string label) {
  const auto it = bindings_.find(name);
  if (it != bindings_.end()) {
    if (it->second != label) {
      throw SpecError("variable " + name + " bound twice ('" + it->second + "' and '" + label + "')");
    }
    return;
  }
  bindings_.emplace(std::move(name), std::move(label));
}

bool Assignment::contains(std::string_view name) const {
  return bindings_.find(name) != bindings_.end();
}

const std::string& Assignment::at(std::string_view name) const {
  const auto it = bindings_.find(name);
  if (it == bindings_.end()) throw SpecError("variable " + std::string(name) + " is not bound");
  return it->second;
}

Assignment Assignment::merged(const Assignment& other) const {
  Assignment out = *this;
  for (const auto& [name, label] : other.bindings_) out.bind(name, label);
  return out;
}

Assignment Assignment::restricted(std::span<const std::string> names) const {
  Assignment out;
  for (const auto& name : names) {
    const auto it = bindings_.find(name);
    if (it != bindings_.end()) out.bindings_.emplace(it->first, it->second);
  }
  return out;
}

NameList Assignment::names() const {
  NameList out;
  out.reserve(bindings_.size());
  for (const auto& kv : bindings_) out.push_back(kv.first);
  return out;
}

std::string Assignment::to_string() const {
  std::string out;
  for (const auto& [name, label] : bindings_) {
    if (!out.empty()) out += ',';
    out += name;
    out += '=';
    out += label;
  }
  return out.empty() ? std::string("{}") : out;
}

// ---------------------------------------------------------------------------
// DistVector
// ---------------------------------------------------------------------------

namespace {

std::size_t product_size(const std::vector<VariableSpec>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.alphabet.size();
  return n;
}

void validate_specs(const std::vector<VariableSpec>& vars) {
  std::set<std::string, std::less<>> seen;
  for (const auto& v : vars) {
    if (v.name.empty()) throw SpecError("variable with empty name");
    if (!seen.insert(v.name).second) throw SpecError("duplicate variable " + v.name);
    if (v.alphabet.empty()) throw SpecError("variable " + v.name + " has an empty alphabet");
    std::set<std::string_view> labels(v.alphabet.begin(), v.alphabet.end());
    if (labels.size() != v.alphabet.size()) {
      throw SpecError("variable " + v.name + " has repeated alphabet labels");
    }
  }
}

Assignment decode(const std::vector<VariableSpec>& vars, std::size_t flat) {
  Assignment::Map m;
  for (std::size_t k = vars.size(); k-- > 0;) {
    const auto& v = vars[k];
    m.emplace(v.name, v.alphabet[flat % v.alphabet.size()]);
    flat /= v.alphabet.size();
  }
  return Assignment(std::move(m));
}

std::size_t encode(const std::vector<VariableSpec>& vars, const Assignment& a) {
  if (a.size() != vars.size()) {
    throw SpecError("assignment " + a.to_string() + " does not bind exactly the group variables");
  }
  std::size_t flat = 0;
  for (const auto& v : vars) {
    flat = flat * v.alphabet.size() + v.index_of(a.at(v.name));
  }
  return flat;
}

}  // namespace

DistVector::DistVector(std::vector<VariableSpec> over, std::vector<double> probs, double tol_norm)
    : over_(std::move(over)), probs_(std::move(probs)) {
  validate_specs(over_);
  if (probs_.size() != product_size(over_)) {
    throw SpecError("distribution has " + std::to_string(probs_.size()) +
                    " entries but its outcome space has " + std::to_string(product_size(over_)));
  }
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw SpecError("distribution has a negative or non-finite entry");
  }
  const double total = numeric::compensated_sum(probs_);
  if (std::abs(total - 1.0) > tol_norm) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "distribution sums to " << total << ", not 1";
    throw SpecError(msg.str());
  }
}

DistVector DistVector::over_indices(std::vector<double> probs, double tol_norm) {
  VariableSpec v{"X", {}};
  for (std::size_t i = 0; i < probs.size(); ++i) v.alphabet.push_back(std::to_string(i));
  return DistVector({std::move(v)}, std::move(probs), tol_norm);
}

Assignment DistVector::outcome(std::size_t i) const { return decode(over_, i); }

std::size_t DistVector::index_of(const Assignment& outcome) const { return encode(over_, outcome); }

double total_variation(const DistVector& a, const DistVector& b) {
  if (a.size() != b.size()) throw SpecError("total_variation: outcome spaces differ");
  numeric::CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(std::abs(a[i] - b[i]));
  return 0.5 * acc.value();
}

// ---------------------------------------------------------------------------
// JointTable
// ---------------------------------------------------------------------------

JointTable::JointTable(std::vector<VariableSpec> variables, std::vector<double> mass, double tol_norm)
    : variables_(std::move(variables)), mass_(std::move(mass)) {
  validate_specs(variables_);
  if (variables_.empty()) throw SpecError("joint table needs at least one variable");
  if (mass_.size() != product_size(variables_)) {
    throw SpecError("joint table mass has " + std::to_string(mass_.size()) + " cells, expected " +
                    std::to_string(product_size(variables_)));
  }
  for (double p : mass_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw SpecError("joint table has a negative or non-finite mass");
  }
  const double total = numeric::compensated_sum(mass_);
  if (std::abs(total - 1.0) > tol_norm) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "joint table mass sums to " << total << ", not 1";
    throw SpecError(msg.str());
  }
  if (std::abs(total - 1.0) > kTolNorm) {
    for (double& p : mass_) p /= total;
  }
  strides_.assign(variables_.size(), 1);
  for (std::size_t k = variables_.size(); k-- > 1;) {
    strides_[k - 1] = strides_[k] * variables_[k].alphabet.size();
  }
}

JointTable JointTable::from_cells(std::vector<VariableSpec> variables,
                                  const std::vector<std::pair<Assignment, double>>& cells,
                                  double tol_norm) {
  validate_specs(variables);
  std::vector<double> dense(product_size(variables), 0.0);
  std::vector<bool> seen(dense.size(), false);
  for (const auto& [assign, p] : cells) {
    const std::size_t flat = encode(variables, assign);
    if (seen[flat]) throw SpecError("duplicate assignment " + assign.to_string());
    seen[flat] = true;
    dense[flat] = p;
  }
  return JointTable(std::move(variables), std::move(dense), tol_norm);
}

const VariableSpec& JointTable::variable(std::string_view name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return v;
  }
  throw SpecError("unknown variable " + std::string(name));
}

bool JointTable::has_variable(std::string_view name) const {
  return std::any_of(variables_.begin(), variables_.end(),
                     [&](const VariableSpec& v) { return v.name == name; });
}

Assignment JointTable::cell(std::size_t flat_index) const { return decode(variables_, flat_index); }

double JointTable::mass(const Assignment& full) const { return mass_[encode(variables_, full)]; }

void JointTable::validate_event(const Assignment& event) const {
  for (const auto& [name, label] : event) variable(name).index_of(label);
}

double JointTable::probability(const Assignment& event) const {
  validate_event(event);
  // Pin the bound coordinates, then walk the free ones in flat order.
  std::vector<long> fixed(variables_.size(), -1);
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    const auto& v = variables_[k];
    if (event.contains(v.name)) fixed[k] = static_cast<long>(v.index_of(event.at(v.name)));
  }
  numeric::CompensatedSum acc;
  std::vector<std::size_t> digit(variables_.size(), 0);
  for (std::size_t k = 0; k < variables_.size(); ++k) {
    if (fixed[k] >= 0) digit[k] = static_cast<std::size_t>(fixed[k]);
  }
  while (true) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < variables_.size(); ++k) flat += digit[k] * strides_[k];
    acc.add(mass_[flat]);
    // Odometer increment over free coordinates, last variable fastest.
    std::size_t k = variables_.size();
    while (k-- > 0) {
      if (fixed[k] >= 0) continue;
      if (++digit[k] < variables_[k].alphabet.size()) break;
      digit[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return acc.value();
}

std::vector<VariableSpec> JointTable::group(std::span<const std::string> names) const {
  std::set<std::string, std::less<>> wanted;
  for (const auto& n : names) {
    if (!has_variable(n)) throw SpecError("unknown variable " + n);
    if (!wanted.insert(n).second) throw SpecError("variable " + n + " listed twice");
  }
  std::vector<VariableSpec> out;
  for (const auto& v : variables_) {
    if (wanted.count(v.name) != 0) out.push_back(v);
  }
  return out;
}

std::vector<Assignment> JointTable::enumerate(std::span<const std::string> names) const {
  const auto specs = group(names);
  const std::size_t n = product_size(specs);
  std::vector<Assignment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(decode(specs, i));
  return out;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

JointTable marginal(const JointTable& joint, std::span<const std::string> keep) {
  auto specs = joint.group(keep);
  if (specs.size() == joint.variables().size()) return joint;
  NameList kept_names;
  for (const auto& v : specs) kept_names.push_back(v.name);
  std::vector<numeric::CompensatedSum> acc(product_size(specs));
  for (std::size_t flat = 0; flat < joint.cell_count(); ++flat) {
    const Assignment kept = joint.cell(flat).restricted(kept_names);
    acc[encode(specs, kept)].add(joint.masses()[flat]);
  }
  std::vector<double> mass;
  mass.reserve(acc.size());
  for (const auto& a : acc) mass.push_back(a.value());
  return JointTable(std::move(specs), std::move(mass));
}

JointTable marginal(const JointTable& joint, std::initializer_list<std::string> keep) {
  const NameList names(keep);
  return marginal(joint, names);
}

DistVector conditional(const JointTable& joint, std::span<const std::string> target,
                       const Assignment& context) {
  auto specs = joint.group(target);
  for (const auto& v : specs) {
    if (context.contains(v.name)) throw SpecError("target variable " + v.name + " is bound in the context");
  }
  const double p_context = joint.probability(context);
  if (!(p_context > 0.0)) {
    throw ZeroMassContext("context " + context.to_string() + " has zero probability");
  }
  const std::size_t n = product_size(specs);
  std::vector<double> slice(n);
  numeric::CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    slice[i] = joint.probability(context.merged(decode(specs, i)));
    total.add(slice[i]);
  }
  // Divide by the slice total rather than P(context) so the result is
  // normalized to rounding even when the two differ in the last bits.
  const double norm = total.value();
  for (double& p : slice) p /= norm;
  return DistVector(std::move(specs), std::move(slice));
}

DistVector conditional(const JointTable& joint, std::initializer_list<std::string> target,
                       const Assignment& context) {
  const NameList names(target);
  return conditional(joint, names, context);
}

double pmi(const JointTable& joint, const Assignment& x, const Assignment& z, const Assignment& y) {
  if (x.empty() || z.empty()) throw SpecError("pmi: outcome assignments must be non-empty");
  for (const auto& [name, label] : x) {
    if (z.contains(name) || y.contains(name)) throw SpecError("pmi: variable " + name + " appears in two groups");
  }
  for (const auto& [name, label] : z) {
    if (y.contains(name)) throw SpecError("pmi: variable " + name + " appears in two groups");
  }
  const double p_y = joint.probability(y);
  if (!(p_y > 0.0)) throw ZeroMassContext("pmi: P(" + y.to_string() + ") = 0");
  const Assignment yz = y.merged(z);
  const double p_yz = joint.probability(yz);
  if (!(p_yz > 0.0)) throw ZeroMassContext("pmi: P(" + yz.to_string() + ") = 0");
  const Assignment xy = y.merged(x);
  const double p_xy = joint.probability(xy);
  if (!(p_xy > 0.0)) throw UndefinedPMI("pmi: P(" + x.to_string() + " | " + y.to_string() + ") = 0");
  const double p_xyz = joint.probability(xy.merged(z));
  if (p_xyz == 0.0) return numeric::kNegInf;
  // log[P(x,y,z) P(y) / (P(x,y) P(y,z))]; products commute exactly, so the
  // swapped roles of x and z give the identical double.
  return std::log((p_xyz * p_y) / (p_xy * p_yz));
}

}  // namespace pmitilt
