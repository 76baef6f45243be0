#include "pmitilt/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "pmitilt/coherence.hpp"
#include "pmitilt/countable_support.hpp"
#include "pmitilt/errors.hpp"
#include "pmitilt/io.hpp"
#include "pmitilt/numeric.hpp"
#include "pmitilt/report.hpp"

namespace pmitilt::cli {

namespace {

using io::json;
using numeric::kNegInf;

constexpr double kTolIdentity = 1e-10;

// ---------------------------------------------------------------------------
// Loading

template <typename F>
auto load(const std::string& path, F&& parse) {
  const json j = io::read_json_file(path);
  try {
    return parse(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  } catch (const SpecError& e) {
    throw SchemaError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void merge_values(EventValueFunction& into, const EventValueFunction& from, const std::string& source) {
  for (const auto& [event, v] : from.entries()) {
    if (const auto it = into.entries().find(event); it != into.entries().end() && it->second != v) {
      throw SchemaError(source + ": conflicting value for event " + event.to_string());
    }
    into.set(event, v);
  }
}

EventValueFunction load_values(const std::vector<std::string>& paths) {
  EventValueFunction out;
  for (const auto& path : paths) merge_values(out, load(path, io::parse_event_values), path);
  return out;
}

double resolve_alpha(const std::optional<double>& flag, std::initializer_list<std::optional<double>> from_files) {
  if (flag) {
    SolverConfig{*flag}.validate();
    return *flag;
  }
  std::optional<double> seen;
  for (const auto& a : from_files) {
    if (!a) continue;
    if (seen && *seen != *a) throw SchemaError("input files disagree on alpha; pass --alpha");
    seen = a;
  }
  return seen.value_or(1.0);
}

void emit(const json& value, const std::string& out_path, std::ostream& out) {
  const std::string text = io::dump(value);
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!(f << text)) throw SchemaError(out_path + ": cannot write");
}

json dist_to_json(const DistVector& d) {
  json out = json::array();
  for (std::size_t k = 0; k < d.size(); ++k) out.push_back({{"outcome", io::to_json(d.outcome(k))}, {"p", d[k]}});
  return out;
}

json skip_to_json(const Assignment& context, const std::string& reason) {
  return {{"context", io::to_json(context)}, {"reason", reason}};
}

ContextValues context_values_for(const RewardTable& rewards, const EventValueFunction& values) {
  ContextValues out;
  for (const auto& context : contexts_of(rewards.entries)) out[context] = values.at(context);
  return out;
}

// --fill-zero: zero rewards on support cells a file leaves out.
void fill_missing_rewards(const JointTable& joint, RewardTable& rewards) {
  const Direction& dir = rewards.direction;
  for (const auto& context : joint.enumerate(dir.context_names())) {
    if (!(joint.probability(context) > 0.0)) continue;
    const DistVector prior = conditional(joint, dir.updated(), context.restricted(dir.base()));
    for (std::size_t k = 0; k < prior.size(); ++k) {
      if (prior[k] > 0.0) rewards.entries.emplace(CellKey{context, prior.outcome(k)}, 0.0);
    }
  }
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string joint, rewards, problem, out;
  std::string direction = "x_given_yz";
  std::vector<std::string> values;
  std::optional<double> alpha;
  bool skip_zero_mass = false;
  bool fill_zero = false;
};

json solve_problem_file(const SolveArgs& a) {
  return load(a.problem, [&](const json& j) {
    const auto numbers = [&](const char* key, bool required) {
      std::vector<double> v;
      if (!j.contains(key)) {
        if (required) throw SchemaError(std::string("missing field \"") + key + "\"");
        return v;
      }
      const json& arr = j.at(key);
      if (!arr.is_array()) throw SchemaError(std::string(key) + ": expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& x = arr[i];
        if (x.is_number()) {
          v.push_back(x.get<double>());
        } else if (x.is_string() && x.get<std::string>() == "-inf") {
          v.push_back(kNegInf);
        } else {
          throw SchemaError(std::string(key) + "[" + std::to_string(i) + "]: expected a number");
        }
      }
      return v;
    };
    std::optional<double> file_alpha;
    if (j.contains("alpha")) {
      if (!j.at("alpha").is_number()) throw SchemaError("alpha: expected a number");
      file_alpha = j.at("alpha").get<double>();
    }
    const SolverConfig config{resolve_alpha(a.alpha, {file_alpha})};
    std::vector<double> prior = numbers("prior", true);
    std::vector<double> reward = numbers("reward", true);
    std::vector<double> terminal = numbers("terminal", false);
    if (terminal.empty()) terminal.assign(prior.size(), 0.0);
    const SoftUpdateProblem problem(DistVector::over_indices(std::move(prior), io::kFileTolNorm), std::move(reward),
                                    std::move(terminal), config);
    const SoftSolution s = solve_tilt(problem);
    json optimizer = json::array();
    for (double p : s.optimizer.probs()) optimizer.push_back(p);
    return json{{"alpha", config.alpha},
                {"optimizer", std::move(optimizer)},
                {"soft_value", s.soft_value},
                {"log_normalizer", s.log_normalizer}};
  });
}

json solve_joint(const SolveArgs& a) {
  const JointTable joint = load(a.joint, io::parse_joint);
  EventValueFunction terminals = load_values(a.values);
  RewardTable rewards;
  std::optional<double> file_alpha;
  if (!a.rewards.empty()) {
    io::RewardFile rf = load(a.rewards, io::parse_rewards);
    merge_values(terminals, rf.terminals, a.rewards);
    rewards = std::move(rf.rewards);
    file_alpha = rf.alpha;
  } else {
    // No reward file: rewards identically zero on every cell.
    rewards.direction = io::direction_from_json(a.direction, "--direction");
    const Direction& dir = rewards.direction;
    for (const auto& context : joint.enumerate(dir.context_names()))
      for (const auto& outcome : joint.enumerate(dir.updated())) rewards.entries.emplace(CellKey{context, outcome}, 0.0);
    if (a.values.empty()) terminals.set_fallback(0.0);
  }
  if (a.fill_zero) {
    terminals.set_fallback(0.0);
    fill_missing_rewards(joint, rewards);
  }
  const SolverConfig config{resolve_alpha(a.alpha, {file_alpha})};
  config.validate();

  const Direction& dir = rewards.direction;
  json contexts = json::array();
  json skipped = json::array();
  for (const auto& context : joint.enumerate(dir.context_names())) {
    if (!(joint.probability(context) > 0.0)) {
      if (!a.skip_zero_mass) throw ZeroMassContext("context " + context.to_string() + " has zero probability");
      skipped.push_back(skip_to_json(context, "zero-mass context"));
      continue;
    }
    const SoftUpdateProblem problem = build_problem(joint, rewards, terminals, config, context);
    const SoftSolution s = solve_tilt(problem);
    contexts.push_back({{"context", io::to_json(context)},
                        {"prior", dist_to_json(problem.prior())},
                        {"optimizer", dist_to_json(s.optimizer)},
                        {"soft_value", s.soft_value},
                        {"log_normalizer", s.log_normalizer}});
  }
  return {{"alpha", config.alpha},
          {"direction", io::direction_to_json(dir)},
          {"contexts", std::move(contexts)},
          {"skipped", std::move(skipped)}};
}

// ---------------------------------------------------------------------------
// identify

struct IdentifyArgs {
  std::string joint, baseline, out;
  std::string direction = "x_given_yz";
  std::vector<std::string> values;
  double alpha = 1.0;
  bool fill_zero = false;
};

int identify(const IdentifyArgs& a, std::ostream& out) {
  const JointTable joint = load(a.joint, io::parse_joint);
  const Direction dir = io::direction_from_json(a.direction, "--direction");
  EventValueFunction terminals = load_values(a.values);
  if (a.values.empty() || a.fill_zero) terminals.set_fallback(0.0);
  const GaugeShift baseline = a.baseline.empty() ? GaugeShift::uniform(0.0) : load(a.baseline, io::parse_gauge_shift);

  const InteractionTable interaction = identify_interaction(joint, dir, a.alpha);
  const Calibration cal = calibrate_rewards(joint, terminals, a.alpha, baseline, dir, InfiniteCells::Exclude);

  // Every value the calibrated rewards rely on: terminals on the cells and
  // the context values V(context) = K(context).
  EventValueFunction shared;
  for (const auto& [key, r] : cal.rewards.entries) {
    if (const auto v = terminals.find(key.context.merged(key.outcome))) shared.set(key.context.merged(key.outcome), *v);
  }
  for (const auto& [context, v] : cal.context_values) shared.set(context, v);

  json interaction_json = io::interaction_to_json(interaction);
  interaction_json["alpha"] = a.alpha;
  json skipped = json::array();
  for (const auto& s : interaction.skipped) skipped.push_back(skip_to_json(s.context, s.reason));
  json excluded = json::array();
  for (const auto& key : cal.excluded) {
    excluded.push_back({{"context", io::to_json(key.context)},
                        {"outcome", io::to_json(key.outcome)},
                        {"reason", "posterior-null cell: interaction is -inf"}});
  }
  const json sidecar = {{"skipped_contexts", std::move(skipped)}, {"excluded_cells", std::move(excluded)}};
  const json rewards_json = io::rewards_to_json(cal.rewards, terminals, a.alpha);
  const json values_json = io::to_json(shared);

  if (a.out.empty()) {
    out << io::dump({{"interaction", interaction_json},
                     {"rewards", rewards_json},
                     {"values", values_json},
                     {"skipped", sidecar}});
    return kExitOk;
  }
  std::filesystem::create_directories(a.out);
  const std::filesystem::path dir_path(a.out);
  emit(interaction_json, (dir_path / "interaction.json").string(), out);
  emit(rewards_json, (dir_path / "rewards.json").string(), out);
  emit(values_json, (dir_path / "values.json").string(), out);
  emit(sidecar, (dir_path / "skipped.json").string(), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string joint, rewards, swapped_rewards, interaction, out;
  std::vector<std::string> values;
  std::vector<std::string> checks;
  std::optional<double> alpha;
  std::optional<double> tol;
  bool fill_zero = false;
  bool skip_zero_mass = false;
};

struct CheckInputs {
  JointTable joint;
  EventValueFunction values;
  std::vector<RewardSplit> splits;  // forward, then swapped when given
  std::optional<InteractionTable> interaction;
  double alpha = 1.0;
};

std::map<std::string, Assignment> context_key(const Assignment& context) { return {{"context", context}}; }

std::string tag_of(const Direction& d) {
  const std::string t = d.tag();
  return t.empty() ? io::direction_to_json(d).dump() : t;
}

CheckReport gauge_check(const CheckInputs& in, double tol) {
  CheckReport report{"gauge", tol, {}, {}};
  for (const auto& split : in.splits) {
    const Direction& dir = split.rewards.direction;
    const Calibration canonical =
        calibrate_rewards(in.joint, in.values, in.alpha, GaugeShift::uniform(0.0), dir, InfiniteCells::Exclude);
    const GaugeComparison cmp = gauge_equivalent(canonical.rewards, in.values, split.rewards, in.values, tol);
    for (const auto& [context, c] : cmp.shift) {
      const double v = split.context_values.at(context);
      const double residual = std::max(cmp.deviation.at(context), std::abs(c - v));
      report.residuals.push_back({tag_of(dir), context_key(context), residual});
    }
    for (const auto& s : identify_interaction(in.joint, dir, in.alpha).skipped) {
      report.skipped.push_back({tag_of(dir), context_key(s.context), s.reason});
    }
  }
  return report;
}

CheckReport admissibility_check(const CheckInputs& in, double tol) {
  CheckReport report{"admissibility", tol, {}, {}};
  const auto add = [&](const InteractionTable& table) {
    const AdmissibilityReport r = check_admissibility(table, in.joint);
    for (const auto& [context, residual] : r.residual) {
      report.residuals.push_back({tag_of(table.direction), context_key(context), residual});
    }
    for (const auto& s : r.skipped) report.skipped.push_back({tag_of(table.direction), context_key(s.context), s.reason});
  };
  if (in.interaction) {
    add(*in.interaction);
  } else {
    for (const auto& split : in.splits) add(implied_interaction(split, in.values, in.alpha));
  }
  return report;
}

CheckReport decomposition_check(const CheckInputs& in, double tol, bool skip_zero_mass) {
  CheckReport report{"decomposition", tol, {}, {}};
  const SolverConfig config{in.alpha};
  for (const auto& split : in.splits) {
    const Direction& dir = split.rewards.direction;
    for (const auto& context : contexts_of(split.rewards.entries)) {
      if (!(in.joint.probability(context) > 0.0)) {
        if (!skip_zero_mass) throw ZeroMassContext("context " + context.to_string() + " has zero probability");
        report.skipped.push_back({tag_of(dir), context_key(context), "zero-mass context"});
        continue;
      }
      const SoftUpdateProblem problem = build_problem(in.joint, split.rewards, in.values, config, context);
      const DistVector& prior = problem.prior();
      std::vector<DistVector> candidates{prior, solve_tilt(problem).optimizer,
                                         conditional(in.joint, dir.updated(), context)};
      for (std::size_t k = 0; k < prior.size(); ++k) {
        if (prior[k] == 0.0) continue;
        std::vector<double> point(prior.size(), 0.0);
        point[k] = 1.0;
        candidates.emplace_back(prior.over(), std::move(point));
      }
      double worst = 0.0;
      for (const auto& q : candidates) {
        const double r = kl_decomposition_residual(problem, q);
        worst = std::isnan(r) ? r : std::max(worst, r);
        if (std::isnan(worst)) break;
      }
      report.residuals.push_back({tag_of(dir), context_key(context), worst});
    }
  }
  return report;
}

CheckReport commute_check(const CheckInputs& in, double tol) {
  if (in.splits.size() < 2) throw CoverageMismatch("the commute check needs --swapped-rewards");
  CheckReport report{"commute", tol, {}, {}};
  const CommutativityResult r = commutativity_residual(in.splits[0].rewards, in.splits[0].context_values,
                                                       in.splits[1].rewards, in.splits[1].context_values);
  for (const auto& [triple, residual] : r.residual) report.residuals.push_back({"both", {{"triple", triple}}, residual});
  for (const auto& s : r.skipped) report.skipped.push_back({"both", {{"triple", s.triple}}, s.reason});
  return report;
}

int check(const CheckArgs& a, std::ostream& out) {
  CheckInputs in{load(a.joint, io::parse_joint), load_values(a.values), {}, std::nullopt, 1.0};
  if (a.fill_zero) in.values.set_fallback(0.0);

  std::vector<io::RewardFile> files;
  files.push_back(load(a.rewards, io::parse_rewards));
  if (!a.swapped_rewards.empty()) files.push_back(load(a.swapped_rewards, io::parse_rewards));
  std::optional<double> interaction_alpha;
  if (!a.interaction.empty()) {
    io::InteractionFile f = load(a.interaction, io::parse_interaction);
    in.interaction = std::move(f.table);
    interaction_alpha = f.alpha;
  }
  in.alpha = resolve_alpha(a.alpha, {files[0].alpha, files.size() > 1 ? files[1].alpha : std::nullopt,
                                     interaction_alpha});
  merge_values(in.values, files[0].terminals, a.rewards);
  if (files.size() > 1) {
    merge_values(in.values, files[1].terminals, a.swapped_rewards);
    if (!(files[1].rewards.direction == files[0].rewards.direction.swapped())) {
      throw CoverageMismatch("--swapped-rewards is not in the swapped direction of --rewards");
    }
  }
  for (auto& f : files) {
    if (a.fill_zero) fill_missing_rewards(in.joint, f.rewards);
    RewardSplit split{std::move(f.rewards), {}};
    split.context_values = context_values_for(split.rewards, in.values);
    in.splits.push_back(std::move(split));
  }

  std::vector<std::string> requested = a.checks;
  if (requested.empty()) {
    requested = {"gauge", "admissibility", "decomposition"};
    if (in.splits.size() > 1) requested.push_back("commute");
  }
  const std::set<std::string> wanted(requested.begin(), requested.end());

  json reports = json::array();
  bool all_pass = true;
  const auto run_one = [&](CheckReport report) {
    report.normalize();
    all_pass = all_pass && report.pass();
    reports.push_back(to_json(report));
  };
  // Fixed order regardless of how --checks was spelled.
  if (wanted.count("gauge")) run_one(gauge_check(in, a.tol.value_or(kTolIdentity)));
  if (wanted.count("admissibility")) {
    run_one(admissibility_check(in, a.tol.value_or(in.interaction ? kTolAdmit : kTolIdentity)));
  }
  if (wanted.count("commute")) run_one(commute_check(in, a.tol.value_or(kTolIdentity)));
  if (wanted.count("decomposition")) run_one(decomposition_check(in, a.tol.value_or(kTolIdentity), a.skip_zero_mass));

  emit({{"alpha", in.alpha}, {"pass", all_pass}, {"reports", std::move(reports)}}, a.out, out);
  return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// construct

struct ConstructArgs {
  std::string joint, interaction, out;
  double tol = kTolAdmit;
};

json construct(const ConstructArgs& a) {
  const JointTable joint = load(a.joint, io::parse_joint);
  const InteractionTable table = load(a.interaction, io::parse_interaction).table;
  const Direction& dir = table.direction;
  json contexts = json::array();
  for (const auto& context : contexts_of(table.values)) {
    const DistVector prior = conditional(joint, dir.updated(), context.restricted(dir.base()));
    std::vector<double> signal(prior.size(), 0.0);
    for (std::size_t k = 0; k < prior.size(); ++k) {
      const auto it = table.values.find(CellKey{context, prior.outcome(k)});
      if (it != table.values.end()) {
        signal[k] = it->second;
      } else if (prior[k] > 0.0) {
        throw CoverageMismatch("interaction file has no value for context " + context.to_string() + ", outcome " +
                               prior.outcome(k).to_string());
      }
    }
    const DistVector posterior = construct_posterior(prior, signal, a.tol);
    contexts.push_back({{"context", io::to_json(context)}, {"posterior", dist_to_json(posterior)}});
  }
  return {{"direction", io::direction_to_json(dir)}, {"contexts", std::move(contexts)}};
}

// ---------------------------------------------------------------------------
// countable

struct CountableArgs {
  std::string family, out;
  double eps = 1e-9;
  std::size_t head = 0;
};

int countable(const CountableArgs& a, std::ostream& out) {
  const io::CountableSpec spec = load(a.family, io::parse_countable);
  const CountableFamily family = geometric_family(spec.prior, spec.payoff);
  const LogNormalizerEstimate est = log_normalizer_truncated(family, a.eps);
  const TruncationCertificate& c = est.certificate;
  const bool finite = c.status == CertificateStatus::Finite;
  json result = {{"status", to_string(c.status)},
                 {"eps", a.eps},
                 {"N", c.N},
                 {"log_normalizer", finite ? io::number_to_json(est.log_normalizer) : json(nullptr)},
                 {"partial", io::number_to_json(c.partial)},
                 {"log_partial", io::number_to_json(c.log_partial)},
                 {"tail_bound", io::number_to_json(c.tail_bound)},
                 {"log_tail_bound", io::number_to_json(c.log_tail_bound)}};
  if (finite && a.head > 0) {
    const TruncatedTilt tilt = tilt_truncated(family, a.eps);
    json head = json::array();
    for (std::size_t n = 0; n < a.head && n < tilt.probs.size(); ++n) head.push_back(tilt.probs[n]);
    result["optimizer_head"] = std::move(head);
    result["optimizer_tail_mass"] = tilt.tail_mass;
  }
  emit(result, a.out, out);
  return finite ? kExitOk : kExitCheckFailed;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Spec:
    case ErrorKind::Schema:
      return kExitSchema;
    case ErrorKind::ZeroMassContext:
      return kExitZeroMass;
    case ErrorKind::CoverageMismatch:
      return kExitCoverage;
    default:
      return kExitDomain;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soft-update tilts, PMI identification and coherence checks", "pmitilt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pmitilt 1.0");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve the soft update per context");
  auto* solve_joint_opt = solve->add_option("--joint", solve_args.joint, "Joint table file")->check(CLI::ExistingFile);
  solve->add_option("--rewards", solve_args.rewards, "Reward file (rewards are zero when omitted)")
      ->check(CLI::ExistingFile)
      ->needs(solve_joint_opt);
  solve->add_option("--problem", solve_args.problem, "Single problem {alpha, prior, reward, terminal}")
      ->check(CLI::ExistingFile)
      ->excludes(solve_joint_opt);
  solve->add_option("--values", solve_args.values, "Event value file(s) for terminals")->check(CLI::ExistingFile);
  solve->add_option("--direction", solve_args.direction, "Direction when no reward file is given");
  solve->add_option("--alpha", solve_args.alpha, "Inverse temperature");
  solve->add_flag("--skip-zero-mass", solve_args.skip_zero_mass, "Skip zero-mass contexts instead of failing");
  solve->add_flag("--fill-zero", solve_args.fill_zero, "Treat missing terminal values as 0");
  solve->add_option("--out", solve_args.out, "Write the report here instead of stdout");

  IdentifyArgs identify_args;
  auto* ident = app.add_subcommand("identify", "Interaction table and calibrated rewards from a joint");
  ident->add_option("--joint", identify_args.joint, "Joint table file")->required()->check(CLI::ExistingFile);
  ident->add_option("--alpha", identify_args.alpha, "Inverse temperature");
  ident->add_option("--direction", identify_args.direction, "x_given_yz or z_given_yx");
  ident->add_option("--values", identify_args.values, "Terminal value file(s); terminals are 0 when omitted")
      ->check(CLI::ExistingFile);
  ident->add_option("--baseline-file", identify_args.baseline, "Baseline K(context) file")->check(CLI::ExistingFile);
  ident->add_flag("--fill-zero", identify_args.fill_zero, "Treat missing terminal values as 0");
  ident->add_option("--out", identify_args.out, "Directory for interaction/rewards/values/skipped files");

  CheckArgs check_args;
  auto* chk = app.add_subcommand("check", "Run identity checks and emit reports");
  chk->add_option("--joint", check_args.joint, "Joint table file")->required()->check(CLI::ExistingFile);
  chk->add_option("--rewards", check_args.rewards, "Forward reward file")->required()->check(CLI::ExistingFile);
  chk->add_option("--swapped-rewards", check_args.swapped_rewards, "Reward file in the swapped direction")
      ->check(CLI::ExistingFile);
  chk->add_option("--values", check_args.values, "Event value file(s)")->check(CLI::ExistingFile);
  chk->add_option("--interaction", check_args.interaction, "External interaction file for admissibility")
      ->check(CLI::ExistingFile);
  chk->add_option("--checks", check_args.checks, "Comma-separated subset of gauge,admissibility,commute,decomposition")
      ->delimiter(',')
      ->check(CLI::IsMember({"gauge", "admissibility", "commute", "decomposition"}));
  chk->add_option("--alpha", check_args.alpha, "Inverse temperature");
  chk->add_option("--tol", check_args.tol, "Tolerance for every check");
  chk->add_flag("--fill-zero", check_args.fill_zero, "Treat missing values as 0");
  chk->add_flag("--skip-zero-mass", check_args.skip_zero_mass, "Skip zero-mass contexts instead of failing");
  chk->add_option("--out", check_args.out, "Write the report here instead of stdout");

  ConstructArgs construct_args;
  auto* cons = app.add_subcommand("construct", "Posterior from an interaction file");
  cons->add_option("--joint", construct_args.joint, "Joint table file")->required()->check(CLI::ExistingFile);
  cons->add_option("--interaction", construct_args.interaction, "Interaction file")
      ->required()
      ->check(CLI::ExistingFile);
  cons->add_option("--tol", construct_args.tol, "Admissibility tolerance");
  cons->add_option("--out", construct_args.out, "Write the report here instead of stdout");

  CountableArgs countable_args;
  auto* cnt = app.add_subcommand("countable", "Log-normalizer of a countable family with a certificate");
  cnt->add_option("--family", countable_args.family, "Family file")->required()->check(CLI::ExistingFile);
  cnt->add_option("--eps", countable_args.eps, "Relative tail tolerance");
  cnt->add_option("--head", countable_args.head, "Print the first H optimizer probabilities");
  cnt->add_option("--out", countable_args.out, "Write the report here instead of stdout");

  std::vector<const char*> argv{"pmitilt"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*solve) {
      if (solve_args.problem.empty() && solve_args.joint.empty()) {
        throw SchemaError("solve needs --joint or --problem");
      }
      emit(solve_args.problem.empty() ? solve_joint(solve_args) : solve_problem_file(solve_args), solve_args.out,
           out);
      return kExitOk;
    }
    if (*ident) return identify(identify_args, out);
    if (*chk) return check(check_args, out);
    if (*cons) {
      emit(construct(construct_args), construct_args.out, out);
      return kExitOk;
    }
    if (*cnt) return countable(countable_args, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitSchema;
}

}  // namespace pmitilt::cli
