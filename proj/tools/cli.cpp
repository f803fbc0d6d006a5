#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heis/extremals.hpp"
#include "heis/ledger.hpp"
#include "heis/ode_oracle.hpp"
#include "heis/reachability.hpp"
#include "heis/shooting.hpp"
#include "heis/verify.hpp"

namespace heis::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
    throw UsageError(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

GroupPoint parse_point(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3) {
    throw UsageError("--point expects x,y,z (got '" + text + "')");
  }
  return {parse_number(parts[0], "--point x"), parse_number(parts[1], "--point y"),
          parse_number(parts[2], "--point z")};
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> params;
  if (text.empty()) return params;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--params entries must look like key=value (got '" + item + "')");
    }
    const std::string key = item.substr(0, eq);
    if (params.count(key) != 0) throw UsageError("--params: duplicate key " + key);
    params[key] = parse_number(item.substr(eq + 1), "--params " + key);
  }
  return params;
}

Problem problem_from(int id) { return id == 1 ? Problem::P1 : Problem::P2; }
ExtremalKind kind_from(const std::string& name) {
  return name == "normal" ? ExtremalKind::Normal : ExtremalKind::Abnormal;
}

/// Required and optional parameter keys of each family.
struct FamilyKeys {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

FamilyKeys family_keys(Problem problem, ExtremalKind kind) {
  if (problem == Problem::P1) {
    if (kind == ExtremalKind::Abnormal) return {{"theta0"}, {}};
    return {{"theta0", "a"}, {}};
  }
  if (kind == ExtremalKind::Abnormal) return {{"h2_0", "h3"}, {}};
  return {{"h2_0", "h3"}, {"h1_0"}};
}

std::string family_name(Problem problem, ExtremalKind kind) {
  return std::string(problem == Problem::P1 ? "p1-" : "p2-") + to_string(kind);
}

ExtremalParams build_params(Problem problem, ExtremalKind kind, const std::map<std::string, double>& given) {
  const FamilyKeys keys = family_keys(problem, kind);
  std::string expected;
  for (const std::string& k : keys.required) expected += (expected.empty() ? "" : ",") + k;
  for (const std::string& k : keys.required) {
    if (given.count(k) == 0) {
      throw UsageError("missing parameter " + k + " (" + to_string(problem) + " " + to_string(kind) +
                       " needs " + expected + ")");
    }
  }
  for (const auto& [k, v] : given) {
    const bool known = std::find(keys.required.begin(), keys.required.end(), k) != keys.required.end() ||
                       std::find(keys.optional.begin(), keys.optional.end(), k) != keys.optional.end();
    if (!known) {
      throw UsageError("unknown parameter " + k + " for " + to_string(problem) + " " + to_string(kind));
    }
  }
  if (problem == Problem::P1) {
    if (kind == ExtremalKind::Abnormal) return P1AbnormalParams{given.at("theta0")};
    return P1NormalParams{given.at("theta0"), given.at("a")};
  }
  if (kind == ExtremalKind::Abnormal) return P2AbnormalParams{given.at("h2_0"), given.at("h3")};
  P2NormalParams p = p2_normal_from(given.at("h2_0"), given.at("h3"));
  if (given.count("h1_0") != 0) p.h1_0 = given.at("h1_0");
  return p;
}

Json params_json(const ExtremalParams& params) {
  struct Visitor {
    Json operator()(const P1AbnormalParams& p) const { return {{"theta0", p.theta0}}; }
    Json operator()(const P1NormalParams& p) const { return {{"theta0", p.theta0}, {"a", p.a}}; }
    Json operator()(const P2AbnormalParams& p) const { return {{"h2_0", p.h2_0}, {"h3", p.h3}}; }
    Json operator()(const P2NormalParams& p) const {
      return {{"h1_0", p.h1_0}, {"h2_0", p.h2_0}, {"h3", p.h3}};
    }
  };
  return std::visit(Visitor{}, params);
}

Json spec_json(const ExtremalSpec& spec) {
  return {{"problem", to_string(spec.problem())},
          {"case", to_string(spec.kind())},
          {"params", params_json(spec.params)},
          {"duration", spec.duration}};
}

Json point_json(const GroupPoint& q) { return Json::array({q.x, q.y, q.z}); }

Json control_json(const Control& u) { return Json::array({u.u1, u.u2, u.u3}); }

Json schedule_json(const ControlSchedule& schedule) {
  Json pieces = Json::array();
  for (const ControlPiece& piece : schedule.pieces) {
    Json entry{{"duration", piece.duration}};
    if (const auto* u = std::get_if<Control>(&piece.law)) {
      entry["type"] = "constant";
      entry["u"] = control_json(*u);
    } else if (const auto* r = std::get_if<RotatingControl>(&piece.law)) {
      entry["type"] = "rotating";
      entry["speed"] = r->speed;
      entry["heading"] = r->heading;
      entry["turn_rate"] = r->turn_rate;
      entry["vertical"] = r->vertical;
    } else {
      throw std::logic_error("schedule piece with an opaque control law cannot be serialized");
    }
    pieces.push_back(entry);
  }
  return pieces;
}

Json ledger_refs(const std::vector<LedgerEntry>& entries) {
  Json refs = Json::array();
  for (const LedgerEntry& e : entries) {
    refs.push_back({{"id", std::string(e.id)}, {"status", to_string(e.status)}});
  }
  return refs;
}

const char* const kCsvHeader = "t,x,y,z,h1,h2,h3,u1,u2,u3,J";

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // print -0 as 0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string text = kCsvHeader;
  text += '\n';
  for (const Sample& s : traj.samples) {
    const double row[] = {s.t, s.q.x, s.q.y, s.q.z, s.h.h1, s.h.h2, s.h.h3, s.u.u1, s.u.u2, s.u.u3, s.length};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i != 0) text += ',';
      text += format_number(row[i]);
    }
    text += '\n';
  }
  return text;
}

Json trajectory_json(const ExtremalSpec& spec, const Trajectory& traj) {
  Json rows = Json::array();
  for (const Sample& s : traj.samples) {
    rows.push_back(
        Json::array({s.t, s.q.x, s.q.y, s.q.z, s.h.h1, s.h.h2, s.h.h3, s.u.u1, s.u.u2, s.u.u3, s.length}));
  }
  Json columns = Json::array();
  for (const std::string& c : split(kCsvHeader, ',')) columns.push_back(c);
  return {{"spec", spec_json(spec)}, {"columns", columns}, {"rows", rows}};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open " + path + " for writing");
  file << text;
  if (!file) throw UsageError("failed writing " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Shared envelope of the verify / reach / distance reports.
Json run_report(const std::string& command, Json parameters, Json outputs, Json ledger) {
  return {{"command", command}, {"parameters", parameters}, {"outputs", outputs}, {"ledger", ledger}};
}

struct Options {
  std::string ledger_path;
  bool timing{false};

  // Defaults only reach verify; the other commands require both flags.
  int problem{2};
  std::string kind{"normal"};
  std::string params;
  double tmax{0.0};
  std::size_t samples{101};
  std::string format{"csv"};
  std::string out_path;

  std::size_t sweeps{50};
  double step{1e-4};
  std::uint64_t seed{7};
  double budget{kSweepBudget};
  double max_duration{10.0};
  double bound{2.0};
  bool verbose{false};

  std::string point;
  bool plan{false};
  std::optional<double> loop_length;
  double plan_step{1e-3};
};

std::string cmd_extremal(const Options& o) {
  const Problem problem = problem_from(o.problem);
  const ExtremalKind kind = kind_from(o.kind);
  const ExtremalSpec spec{build_params(problem, kind, parse_params(o.params)), o.tmax};
  Trajectory traj;
  try {
    traj = sample_extremal(spec, o.samples);
  } catch (const DomainError& e) {
    throw UsageError(std::string("precondition violated: ") + e.what());
  }
  if (o.format == "json") return dump(trajectory_json(spec, traj));
  return trajectory_csv(traj);
}

Json cmd_verify(const Options& o) {
  SweepConfig cfg;
  cfg.problem = problem_from(o.problem);
  cfg.kind = kind_from(o.kind);
  cfg.draws = o.sweeps;
  cfg.step = o.step;
  cfg.seed = o.seed;
  cfg.budget = o.budget;
  cfg.max_duration = o.max_duration;
  cfg.bound = o.bound;
  const SweepReport report = run_sweep(cfg);

  Json parameters{{"problem", to_string(cfg.problem)}, {"case", to_string(cfg.kind)},
                  {"sweeps", cfg.draws},           {"step", cfg.step},
                  {"seed", cfg.seed},              {"budget", cfg.budget},
                  {"max_duration", cfg.max_duration}, {"bound", cfg.bound}};
  Json outputs{{"worst_state_deviation", report.worst_state},
               {"worst_covector_deviation", report.worst_covector},
               {"worst_draw", {{"index", report.worst_index}, {"spec", spec_json(report.draws.at(report.worst_index).spec)}}},
               {"within_budget", report.within_budget},
               {"budget_status", report.within_budget ? "pass" : "fail"}};
  if (o.verbose) {
    Json draws = Json::array();
    for (const SweepDraw& d : report.draws) {
      draws.push_back({{"spec", spec_json(d.spec)},
                       {"state_deviation", d.deviation.state},
                       {"covector_deviation", d.deviation.covector.value_or(0.0)}});
    }
    outputs["draws"] = draws;
  }
  return run_report("verify", parameters, outputs,
                    ledger_refs(ledger_entries_for(family_name(cfg.problem, cfg.kind))));
}

Json cmd_reach(const Options& o) {
  const Problem problem = problem_from(o.problem);
  const GroupPoint q = parse_point(o.point);
  Json parameters{{"problem", to_string(problem)}, {"point", point_json(q)}};
  if (problem == Problem::P2) {
    if (o.plan || o.loop_length) throw UsageError("--plan and --loop-length apply to --problem 1 only");
    const Membership m = membership_p2(q);
    Json outputs{{"verdict", to_string(m.verdict)}, {"witness", m.witness ? Json(*m.witness) : Json(nullptr)}};
    std::vector<LedgerEntry> triggered;
    if (q.x < 0.0 && m.verdict != Verdict::Outside) {
      triggered = ledger_entries_for("p2-attainable-set");
      outputs["note"] = "x < 0: admitted by the set formula but unreachable (x' = u1 >= 0)";
    }
    return run_report("reach", parameters, outputs, ledger_refs(triggered));
  }

  Json outputs{{"verdict", "Reachable"}};
  if (o.plan || o.loop_length) {
    ControlSchedule schedule;
    if (o.loop_length) {
      if (!(*o.loop_length > 0.0)) throw UsageError("--loop-length must be positive");
      schedule = long_trajectory_p1(q, *o.loop_length);
      parameters["loop_length"] = *o.loop_length;
    } else {
      schedule = plan_reach_p1(q);
    }
    IntegratorConfig cfg;
    cfg.step = o.plan_step;
    const Trajectory traj = integrate_schedule(Problem::P1, GroupPoint{}, schedule, cfg);
    const GroupPoint end = traj.endpoint();
    const double error = std::sqrt((end.x - q.x) * (end.x - q.x) + (end.y - q.y) * (end.y - q.y) +
                                   (end.z - q.z) * (end.z - q.z));
    parameters["step"] = cfg.step;
    outputs["schedule"] = schedule_json(schedule);
    outputs["duration"] = schedule.total_duration();
    outputs["endpoint"] = point_json(end);
    outputs["endpoint_error"] = error;
    outputs["length"] = traj.total_length();
    outputs["within_tolerance"] = error <= kPlanTolerance;
  }
  return run_report("reach", parameters, outputs, Json::array());
}

Json cmd_distance(const Options& o) {
  const Problem problem = problem_from(o.problem);
  const GroupPoint q = parse_point(o.point);
  Json parameters{{"problem", to_string(problem)}, {"point", point_json(q)}};
  const DistanceResult d = problem == Problem::P1 ? lorentz_distance_p1(q) : lorentz_distance_p2(q);
  Json outputs{{"kind", to_string(d.kind)},
               {"distance", d.kind == DistanceKind::Finite ? Json(d.value) : Json(nullptr)},
               {"note", d.note}};
  std::vector<LedgerEntry> triggered;
  if (problem == Problem::P2 && q.x < 0.0 && membership_p2(q).verdict != Verdict::Outside) {
    triggered = ledger_entries_for("p2-attainable-set");
  }
  if (d.maximizer) {
    outputs["maximizer"] = spec_json(d.maximizer->spec);
    outputs["endpoint_error"] = d.maximizer->endpoint_error;
    outputs["iterations"] = d.maximizer->iterations;
    if (o.verbose) {
      Json all = Json::array();
      for (const ExtremalSpec& s : d.maximizer->solutions) all.push_back(spec_json(s));
      outputs["solutions"] = all;
    }
  }
  return run_report("distance", parameters, outputs, ledger_refs(triggered));
}

void add_problem(CLI::App* sub, Options& o, bool required = true) {
  sub->add_option("--problem", o.problem, "1 (cone around X3) or 2 (cone around X1)")
      ->required(required)
      ->check(CLI::IsMember({1, 2}));
}

void add_case(CLI::App* sub, Options& o, bool required = true) {
  sub->add_option("--case", o.kind, "extremal family")
      ->required(required)
      ->check(CLI::IsMember({"normal", "abnormal"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Lorentzian extremals, attainable sets and distances on the Heisenberg group", "heis"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.add_option("--ledger", o.ledger_path, "write the discrepancy ledger (JSON) to PATH");
  app.add_flag("--timing", o.timing, "add wall-clock seconds to reports (breaks byte-identical output)");

  CLI::App* extremal = app.add_subcommand("extremal", "sample a closed-form extremal as CSV or JSON");
  add_problem(extremal, o);
  add_case(extremal, o);
  extremal->add_option("--params", o.params,
                       "k=v list: P1 abnormal theta0; P1 normal theta0,a; P2 abnormal h2_0,h3 "
                       "(time scales with the covector); P2 normal h2_0,h3[,h1_0]");
  extremal->add_option("--tmax", o.tmax, "duration t1")->required()->check(CLI::PositiveNumber);
  extremal->add_option("--samples", o.samples, "uniform samples on [0, tmax]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100'000'000}));
  extremal->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  extremal->add_option("--out", o.out_path, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "seeded closed-form vs RK4 sweep");
  add_problem(verify, o, false);
  add_case(verify, o, false);
  verify->add_option("--sweeps", o.sweeps, "number of parameter draws")->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));
  verify->add_option("--step", o.step, "RK4 step")->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed, "mt19937_64 seed");
  verify->add_option("--budget", o.budget, "deviation budget")->check(CLI::PositiveNumber);
  verify->add_option("--max-duration", o.max_duration, "durations drawn from (0, max]")->check(CLI::PositiveNumber);
  verify->add_option("--bound", o.bound, "|a| or |h2_0|, |h3| bound of the draws")->check(CLI::NonNegativeNumber);
  verify->add_flag("--verbose", o.verbose, "list every draw");
  verify->add_option("--out", o.out_path, "output file (default stdout)");

  CLI::App* reach = app.add_subcommand("reach", "attainable-set verdict (P2) or controllability plan (P1)");
  add_problem(reach, o);
  reach->add_option("--point", o.point, "target x,y,z (use --point=-1,0,0 for a leading minus)")->required();
  reach->add_flag("--plan", o.plan, "P1: emit an admissible schedule reaching the point");
  reach->add_option("--loop-length", o.loop_length, "P1: append closed timelike loops of total length >= L");
  reach->add_option("--step", o.plan_step, "RK4 step used to check the plan")->check(CLI::PositiveNumber);
  reach->add_option("--out", o.out_path, "output file (default stdout)");

  CLI::App* distance = app.add_subcommand("distance", "Lorentzian distance from the identity");
  add_problem(distance, o);
  distance->add_option("--point", o.point, "target x,y,z")->required();
  distance->add_flag("--verbose", o.verbose, "list every converged extremal");
  distance->add_option("--out", o.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!o.ledger_path.empty()) emit(dump(ledger_json()), o.ledger_path, out);
    if (app.get_subcommands().empty()) {
      if (o.ledger_path.empty()) {
        err << app.help();
        return kExitUsage;
      }
      return kExitOk;
    }
    const auto started = std::chrono::steady_clock::now();
    auto finish = [&](Json report) {
      if (o.timing) {
        report["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      }
      emit(dump(report), o.out_path, out);
    };
    if (extremal->parsed()) {
      emit(cmd_extremal(o), o.out_path, out);
    } else if (verify->parsed()) {
      finish(cmd_verify(o));
    } else if (reach->parsed()) {
      finish(cmd_reach(o));
    } else if (distance->parsed()) {
      finish(cmd_distance(o));
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShootingError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace heis::cli
