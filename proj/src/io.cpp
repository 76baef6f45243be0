#include "pmitilt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "pmitilt/errors.hpp"
#include "pmitilt/numeric.hpp"

namespace pmitilt::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where.empty() ? what : where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require_array(const json& obj, const char* key, const std::string& where) {
  const json& a = require(obj, key, where);
  if (!a.is_array()) fail(where + "." + key, "expected an array");
  return a;
}

std::string index_path(const std::string& where, const char* key, std::size_t i) {
  return where + (where.empty() ? "" : ".") + key + "[" + std::to_string(i) + "]";
}

double as_number(const json& j, const std::string& where, bool allow_neg_inf) {
  if (j.is_number()) return j.get<double>();
  if (allow_neg_inf && j.is_string() && j.get<std::string>() == "-inf") return numeric::kNegInf;
  fail(where, allow_neg_inf ? "expected a number or \"-inf\"" : "expected a number");
}

double as_finite(const json& j, const std::string& where) {
  const double v = as_number(j, where, false);
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

NameList as_names(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of variable names");
  NameList out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(where + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

void format_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v < 0 ? "\"-inf\"" : "\"inf\"";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
}

void dump_into(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += json(key).dump();
        out += ": ";
        dump_into(out, value, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i != 0) out += ",\n";
        out += inner;
        dump_into(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      format_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

template <typename F>
auto rethrow_as_schema(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError& e) {
    fail(where, e.what());
  }
}

void check_names(const Assignment& a, const NameList& expected, const std::string& where) {
  if (a.names() != expected) {
    std::string want;
    for (const auto& n : expected) want += (want.empty() ? "" : ",") + n;
    fail(where, "expected variables {" + want + "}, got " + a.to_string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann's message already carries "at line L, column C".
    throw SchemaError(source + ": malformed JSON: " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

std::string dump(const json& value) {
  std::string out;
  dump_into(out, value, 0);
  out += '\n';
  return out;
}

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

json to_json(const Assignment& a) {
  json out = json::object();
  for (const auto& [name, label] : a) out[name] = label;
  return out;
}

Assignment assignment_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object mapping variable names to labels");
  Assignment a;
  for (const auto& [name, label] : j.items()) {
    if (!label.is_string()) fail(where + "." + name, "expected a string label");
    a.bind(name, label.get<std::string>());
  }
  return a;
}

// ---------------------------------------------------------------------------

JointTable parse_joint(const json& j) {
  const json& vars = require_array(j, "variables", "");
  std::vector<VariableSpec> specs;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string where = index_path("", "variables", i);
    VariableSpec v;
    const json& name = require(vars[i], "name", where);
    if (!name.is_string()) fail(where + ".name", "expected a string");
    v.name = name.get<std::string>();
    v.alphabet = as_names(require(vars[i], "alphabet", where), where + ".alphabet");
    specs.push_back(std::move(v));
  }
  const json& mass = require_array(j, "mass", "");
  std::vector<std::pair<Assignment, double>> cells;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const std::string where = index_path("", "mass", i);
    Assignment a = assignment_from_json(require(mass[i], "assign", where), where + ".assign");
    const double p = as_finite(require(mass[i], "p", where), where + ".p");
    if (p < 0.0) fail(where + ".p", "negative probability");
    cells.emplace_back(std::move(a), p);
  }
  return rethrow_as_schema("joint", [&] { return JointTable::from_cells(specs, cells, kFileTolNorm); });
}

json to_json(const JointTable& joint) {
  json vars = json::array();
  for (const auto& v : joint.variables()) vars.push_back({{"name", v.name}, {"alphabet", v.alphabet}});
  json mass = json::array();
  for (std::size_t k = 0; k < joint.cell_count(); ++k) {
    if (joint.masses()[k] == 0.0) continue;
    mass.push_back({{"assign", to_json(joint.cell(k))}, {"p", joint.masses()[k]}});
  }
  return {{"variables", std::move(vars)}, {"mass", std::move(mass)}};
}

json direction_to_json(const Direction& d) {
  const std::string tag = d.tag();
  if (!tag.empty()) return tag;
  return {{"updated", d.updated()}, {"base", d.base()}, {"observed", d.observed()}};
}

Direction direction_from_json(const json& j, const std::string& where) {
  return rethrow_as_schema(where, [&] {
    if (j.is_string()) return Direction::from_tag(j.get<std::string>());
    if (!j.is_object()) fail(where, "expected a direction tag or object");
    return Direction(as_names(require(j, "updated", where), where + ".updated"),
                     j.contains("base") ? as_names(j.at("base"), where + ".base") : NameList{},
                     as_names(require(j, "observed", where), where + ".observed"));
  });
}

namespace {

struct CellRecord {
  CellKey key;
  double value;
  const json* entry;
  std::string where;
};

std::vector<CellRecord> parse_cells(const json& j, const Direction& dir, const char* value_key) {
  const json& entries = require_array(j, "entries", "");
  const NameList context_names = dir.context_names();
  std::vector<CellRecord> out;
  std::set<CellKey> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = index_path("", "entries", i);
    const json& e = entries[i];
    Assignment context = assignment_from_json(require(e, "context", where), where + ".context");
    Assignment outcome = assignment_from_json(require(e, "outcome", where), where + ".outcome");
    check_names(context, context_names, where + ".context");
    check_names(outcome, dir.updated(), where + ".outcome");
    const double v = as_number(require(e, value_key, where), where + "." + value_key, true);
    CellKey key{std::move(context), std::move(outcome)};
    if (!seen.insert(key).second) fail(where, "duplicate cell");
    out.push_back({std::move(key), v, &e, where});
  }
  return out;
}

std::optional<double> optional_alpha(const json& j) {
  const json* a = optional_field(j, "alpha");
  if (a == nullptr) return std::nullopt;
  const double alpha = as_finite(*a, "alpha");
  if (!(alpha > 0.0)) fail("alpha", "must be positive");
  return alpha;
}

}  // namespace

RewardFile parse_rewards(const json& j) {
  if (!j.is_object()) fail("", "expected an object");
  RewardFile out;
  out.rewards.direction = direction_from_json(require(j, "direction", ""), "direction");
  out.alpha = optional_alpha(j);
  if (const json* c = optional_field(j, "convention"); c != nullptr && c->is_string()) {
    out.rewards.convention = c->get<std::string>();
  }
  for (auto& cell : parse_cells(j, out.rewards.direction, "r")) {
    if (const json* v = optional_field(*cell.entry, "V"); v != nullptr) {
      out.terminals.set(cell.key.context.merged(cell.key.outcome), as_finite(*v, cell.where + ".V"));
    }
    out.rewards.entries.emplace(std::move(cell.key), cell.value);
  }
  return out;
}

json rewards_to_json(const RewardTable& rewards, const EventValueFunction& terminals, double alpha) {
  json entries = json::array();
  for (const auto& [key, r] : rewards.entries) {
    json e = {{"context", to_json(key.context)}, {"outcome", to_json(key.outcome)}, {"r", number_to_json(r)}};
    if (const auto v = terminals.find(key.context.merged(key.outcome))) e["V"] = *v;
    entries.push_back(std::move(e));
  }
  json out = {{"direction", direction_to_json(rewards.direction)}, {"alpha", alpha}, {"entries", std::move(entries)}};
  if (!rewards.convention.empty()) out["convention"] = rewards.convention;
  return out;
}

InteractionFile parse_interaction(const json& j) {
  if (!j.is_object()) fail("", "expected an object");
  InteractionFile out;
  out.table.direction = direction_from_json(require(j, "direction", ""), "direction");
  out.alpha = optional_alpha(j);
  for (auto& cell : parse_cells(j, out.table.direction, "i")) {
    out.table.values.emplace(std::move(cell.key), cell.value);
  }
  return out;
}

json interaction_to_json(const InteractionTable& table) {
  json entries = json::array();
  for (const auto& [key, i] : table.values) {
    entries.push_back({{"context", to_json(key.context)}, {"outcome", to_json(key.outcome)}, {"i", number_to_json(i)}});
  }
  return {{"direction", direction_to_json(table.direction)}, {"entries", std::move(entries)}};
}

EventValueFunction parse_event_values(const json& j) {
  const json& entries = require_array(j, "entries", "");
  EventValueFunction out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = index_path("", "entries", i);
    Assignment event = assignment_from_json(require(entries[i], "event", where), where + ".event");
    const double v = as_finite(require(entries[i], "v", where), where + ".v");
    if (const auto it = out.entries().find(event); it != out.entries().end() && it->second != v) {
      fail(where, "event " + event.to_string() + " listed twice with different values");
    }
    out.set(event, v);
  }
  return out;
}

json to_json(const EventValueFunction& values) {
  json entries = json::array();
  for (const auto& [event, v] : values.entries()) entries.push_back({{"event", to_json(event)}, {"v", v}});
  return {{"entries", std::move(entries)}};
}

GaugeShift parse_gauge_shift(const json& j) {
  if (!j.is_object()) fail("", "expected an object");
  GaugeShift out;
  if (const json* u = optional_field(j, "uniform"); u != nullptr) out = GaugeShift::uniform(as_finite(*u, "uniform"));
  if (const json* entries = optional_field(j, "entries"); entries != nullptr) {
    if (!entries->is_array()) fail("entries", "expected an array");
    for (std::size_t i = 0; i < entries->size(); ++i) {
      const std::string where = index_path("", "entries", i);
      const json& e = (*entries)[i];
      out.set(assignment_from_json(require(e, "context", where), where + ".context"),
              as_finite(require(e, "c", where), where + ".c"));
    }
  }
  return out;
}

CountableSpec parse_countable(const json& j) {
  CountableSpec out;
  const json& prior = require(j, "prior", "");
  const json& kind = require(prior, "kind", "prior");
  if (kind != "geometric") fail("prior.kind", "only \"geometric\" priors are supported");
  out.prior.q = as_finite(require(prior, "q", "prior"), "prior.q");
  if (!(out.prior.q > 0.0 && out.prior.q < 1.0)) fail("prior.q", "must lie in (0, 1)");

  const json& payoff = require(j, "payoff", "");
  const json& pkind = require(payoff, "kind", "payoff");
  std::string payoff_kind;
  if (pkind == "constant") {
    payoff_kind = "constant";
    out.payoff.intercept = as_finite(require(payoff, "value", "payoff"), "payoff.value");
  } else if (pkind == "linear") {
    payoff_kind = "linear";
    out.payoff.slope = as_finite(require(payoff, "slope", "payoff"), "payoff.slope");
    if (const json* b = optional_field(payoff, "intercept"); b != nullptr) {
      out.payoff.intercept = as_finite(*b, "payoff.intercept");
    }
  } else {
    fail("payoff.kind", "only \"constant\" and \"linear\" payoffs are supported");
  }

  if (const json* bounds = optional_field(j, "bounds"); bounds != nullptr) {
    if (const json* t = optional_field(*bounds, "tail"); t != nullptr && *t != "geometric") {
      fail("bounds.tail", "must be \"geometric\" for a geometric prior");
    }
    if (const json* b = optional_field(*bounds, "payoff"); b != nullptr && *b != payoff_kind) {
      fail("bounds.payoff", "must match payoff.kind (\"" + payoff_kind + "\")");
    }
  }
  return out;
}

}  // namespace pmitilt::io
