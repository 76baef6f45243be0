#pragma once
//
// JSON file formats. All parse_* functions throw SchemaError with a
// location prefix ("mass[3].p: ...") on any violation.
//
//   joint        {"variables":[{"name":"X","alphabet":["0","1"]},...],
//                 "mass":[{"assign":{"X":"0",...},"p":0.125},...]}
//   rewards      {"direction":"x_given_yz","alpha":1.0,
//                 "entries":[{"context":{...},"outcome":{...},"r":0.47,"V":0.0},...]}
//   interaction  same as rewards with "i" instead of "r" (no "V")
//   event values {"entries":[{"event":{...},"v":0.3},...]}
//   baseline     {"entries":[{"context":{...},"c":3.0},...],"uniform":0.0}
//   countable    {"prior":{"kind":"geometric","q":0.5},
//                 "payoff":{"kind":"linear","slope":0.405465},
//                 "bounds":{"tail":"geometric","payoff":"linear"}}
//
// -inf is written and read as the string "-inf". Directions are either a
// tag ("x_given_yz", "z_given_yx") or {"updated":[..],"base":[..],"observed":[..]}.
//

#include <optional>
#include <string>

#include "json.hpp"
#include "pmitilt/countable_support.hpp"
#include "pmitilt/dist_core.hpp"
#include "pmitilt/event_values.hpp"
#include "pmitilt/identification.hpp"

namespace pmitilt::io {

using nlohmann::json;

// Loader tolerance on |sum p - 1| for joint files.
inline constexpr double kFileTolNorm = 1e-9;

// Reads and parses a JSON file. Syntax errors become SchemaError naming the
// file, line and column.
json read_json_file(const std::string& path);
json parse_json_text(const std::string& text, const std::string& source);

// Canonical serialization: keys sorted, two-space indent, doubles with 17
// significant digits. Identical values always give identical bytes.
std::string dump(const json& value);

json number_to_json(double v);
json to_json(const Assignment& a);
Assignment assignment_from_json(const json& j, const std::string& where);

JointTable parse_joint(const json& j);
json to_json(const JointTable& joint);

json direction_to_json(const Direction& d);
Direction direction_from_json(const json& j, const std::string& where);

struct RewardFile {
  RewardTable rewards;
  EventValueFunction terminals;  // from the per-entry "V" fields
  std::optional<double> alpha;
};
RewardFile parse_rewards(const json& j);
json rewards_to_json(const RewardTable& rewards, const EventValueFunction& terminals, double alpha);

struct InteractionFile {
  InteractionTable table;
  std::optional<double> alpha;
};
InteractionFile parse_interaction(const json& j);
json interaction_to_json(const InteractionTable& table);

EventValueFunction parse_event_values(const json& j);
json to_json(const EventValueFunction& values);

GaugeShift parse_gauge_shift(const json& j);

struct CountableSpec {
  GeometricPrior prior;
  LinearPayoff payoff;
};
CountableSpec parse_countable(const json& j);

}  // namespace pmitilt::io
