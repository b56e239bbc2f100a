// Copyright 2026 The Firesquad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "firesquad/io.h"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace firesquad {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kScenarioFormat = "firesquad-scenario";
constexpr std::string_view kTraceFormat = "firesquad-trace";
constexpr std::string_view kSweepFormat = "firesquad-sweep";

[[noreturn]] void Fail(const std::string& what) { throw ParseError(what); }

Json Parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    Fail(std::string("malformed JSON: ") + e.what());
  }
}

void RejectUnknown(const Json& obj, std::initializer_list<std::string_view> keys,
                   std::string_view where) {
  if (!obj.is_object()) Fail(std::string(where) + " must be an object");
  const std::set<std::string_view> allowed(keys);
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      Fail("unknown field '" + key + "' in " + std::string(where));
    }
  }
}

const Json& Require(const Json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    Fail("missing field '" + std::string(key) + "' in " + std::string(where));
  }
  return *it;
}

template <typename T>
T Get(const Json& value, std::string_view what) {
  try {
    return value.get<T>();
  } catch (const Json::exception&) {
    Fail("field " + std::string(what) + " has the wrong type");
  }
}

void CheckHeader(const Json& doc, std::string_view format) {
  if (!doc.is_object()) Fail("document must be a JSON object");
  const std::string got = Get<std::string>(Require(doc, "format", "document"),
                                           "format");
  if (got != format) {
    Fail("expected format '" + std::string(format) + "', got '" + got + "'");
  }
  const int version = Get<int>(Require(doc, "version", "document"), "version");
  if (version != kFormatVersion) {
    Fail("unsupported format version " + std::to_string(version));
  }
}

Json SetToJson(ProcessSet s) {
  Json out = Json::array();
  for (ProcessId p : s.members()) out.push_back(p);
  return out;
}

ProcessSet SetFromJson(const Json& value, std::string_view what) {
  if (!value.is_array()) Fail(std::string(what) + " must be a list");
  ProcessSet out;
  for (const Json& id : value) out.insert(Get<int>(id, what));
  return out;
}

Json ConfigToJson(const Config& c) { return Json{{"n", c.n}, {"t", c.t}}; }

Config ConfigFromJson(const Json& value) {
  RejectUnknown(value, {"n", "t"}, "config");
  Config c;
  c.n = Get<int>(Require(value, "n", "config"), "n");
  c.t = Get<int>(Require(value, "t", "config"), "t");
  return c;
}

Json FailuresToJson(const FailurePattern& f) {
  Json out = Json::array();
  for (const auto& [p, crash] : f.crashes()) {
    out.push_back(Json{{"process", p},
                       {"crash_round", crash.round},
                       {"blocked", SetToJson(crash.blocked)}});
  }
  return out;
}

FailurePattern FailuresFromJson(const Json& value) {
  if (!value.is_array()) Fail("failures must be a list");
  FailurePattern f;
  for (const Json& rec : value) {
    RejectUnknown(rec, {"process", "crash_round", "blocked"}, "failure record");
    const int p = Get<int>(Require(rec, "process", "failure record"), "process");
    const int round = Get<int>(Require(rec, "crash_round", "failure record"),
                               "crash_round");
    ProcessSet blocked;
    if (rec.contains("blocked")) blocked = SetFromJson(rec["blocked"], "blocked");
    f.AddCrash(p, round, blocked);
  }
  return f;
}

Json InputsToJson(const InputPattern& inputs) {
  Json out = Json::array();
  for (const auto& [k, targets] : inputs.entries()) {
    for (ProcessId p : targets.members()) {
      out.push_back(Json{{"time", k}, {"process", p}});
    }
  }
  return out;
}

InputPattern InputsFromJson(const Json& value) {
  if (!value.is_array()) Fail("inputs must be a list");
  InputPattern inputs;
  for (const Json& rec : value) {
    RejectUnknown(rec, {"time", "process"}, "input record");
    const int k = Get<int>(Require(rec, "time", "input record"), "time");
    if (k < 0) Fail("input time must be non-negative");
    inputs.AddGo(k, Get<int>(Require(rec, "process", "input record"),
                             "process"));
  }
  return inputs;
}

Json StateToJson(const ProcessState& s) {
  return Json{{"req", s.req}, {"fail", SetToJson(s.fail)}, {"view", s.view}};
}

ProcessState StateFromJson(const Json& value) {
  RejectUnknown(value, {"req", "fail", "view"}, "process state");
  ProcessState s;
  s.req = Get<std::vector<int>>(Require(value, "req", "process state"), "req");
  s.fail = SetFromJson(Require(value, "fail", "process state"), "fail");
  s.view =
      Get<std::vector<int>>(Require(value, "view", "process state"), "view");
  return s;
}

Json OptionalTime(const std::optional<Time>& t) {
  return t ? Json(*t) : Json(nullptr);
}

Json ViolationToJson(const Violation& v) {
  return Json{{"property", PropertyName(v.property)},
              {"time", v.time},
              {"detail", v.detail}};
}

Json ScenarioToJson(const Scenario& s, const InitialStateSource& source,
                    bool explicit_length) {
  Json doc{{"format", kScenarioFormat},
           {"version", kFormatVersion},
           {"config", ConfigToJson(s.config)},
           {"failures", FailuresToJson(s.failures)},
           {"inputs", InputsToJson(s.inputs)}};
  switch (source.kind) {
    case InitialStateSource::Kind::kCanonical:
      doc["initial_states"] = "canonical";
      break;
    case InitialStateSource::Kind::kSeeded:
      doc["initial_states"] = "seed:" + std::to_string(source.seed);
      break;
    case InitialStateSource::Kind::kExplicit: {
      Json states = Json::array();
      for (const ProcessState& st : s.initial_states) {
        states.push_back(StateToJson(st));
      }
      doc["initial_states"] = std::move(states);
      break;
    }
  }
  if (explicit_length) doc["length"] = s.length;
  if (!s.label.empty()) doc["label"] = s.label;
  return doc;
}

}  // namespace

std::vector<ProcessState> SeededStates(const Config& config,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ProcessState> out;
  for (int p = 0; p < config.n; ++p) {
    out.push_back(RandomProcessState(config, rng));
  }
  return out;
}

ScenarioFile ParseScenario(std::string_view text) {
  const Json doc = Parse(text);
  CheckHeader(doc, kScenarioFormat);
  RejectUnknown(doc,
                {"format", "version", "config", "failures", "inputs",
                 "initial_states", "length", "label"},
                "scenario");
  ScenarioFile file;
  Scenario& s = file.scenario;
  s.config = ConfigFromJson(Require(doc, "config", "scenario"));
  s.config.Validate();
  if (doc.contains("failures")) s.failures = FailuresFromJson(doc["failures"]);
  if (doc.contains("inputs")) s.inputs = InputsFromJson(doc["inputs"]);
  if (doc.contains("label")) s.label = Get<std::string>(doc["label"], "label");

  const Json& states = doc.contains("initial_states")
                           ? doc["initial_states"]
                           : Json("canonical");
  if (states.is_string()) {
    const std::string spec = states.get<std::string>();
    if (spec == "canonical") {
      file.source.kind = InitialStateSource::Kind::kCanonical;
      s.initial_states.assign(s.config.n, CanonicalState(s.config));
    } else if (spec.starts_with("seed:")) {
      file.source.kind = InitialStateSource::Kind::kSeeded;
      const std::string digits = spec.substr(5);
      std::size_t used = 0;
      try {
        file.source.seed = std::stoull(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (digits.empty() || used != digits.size() || digits[0] == '-') {
        Fail("initial_states seed must be an unsigned 64-bit integer");
      }
      s.initial_states = SeededStates(s.config, file.source.seed);
    } else {
      Fail("initial_states must be \"canonical\", \"seed:<u64>\" or a list");
    }
  } else if (states.is_array()) {
    file.source.kind = InitialStateSource::Kind::kExplicit;
    for (const Json& st : states) s.initial_states.push_back(StateFromJson(st));
    for (const ProcessState& st : s.initial_states) {
      if (!IsSanitized(st, s.config)) {
        Fail("initial state outside the variable domains");
      }
    }
  } else {
    Fail("initial_states must be \"canonical\", \"seed:<u64>\" or a list");
  }

  if (doc.contains("length")) {
    s.length = Get<int>(doc["length"], "length");
  } else {
    file.explicit_length = false;
    s.failures.Validate(s.config);
    s.length = DefaultRunLength(s.config, s.failures, s.inputs);
  }
  s.Validate();
  return file;
}

std::string SerializeScenario(const ScenarioFile& file) {
  return ScenarioToJson(file.scenario, file.source, file.explicit_length)
             .dump(2) +
         "\n";
}

std::string SerializeScenario(const Scenario& scenario) {
  InitialStateSource source;
  source.kind = InitialStateSource::Kind::kExplicit;
  return ScenarioToJson(scenario, source, true).dump(2) + "\n";
}

FailureFile ParseFailures(std::string_view text) {
  const Json doc = Parse(text);
  FailureFile out;
  if (doc.is_array()) {
    out.failures = FailuresFromJson(doc);
    return out;
  }
  const ScenarioFile file = ParseScenario(text);
  out.failures = file.scenario.failures;
  out.config = file.scenario.config;
  return out;
}

void WriteTrace(std::ostream& out, const Trace& trace, Variant variant) {
  const Json header{{"format", kTraceFormat},
                    {"version", kFormatVersion},
                    {"config", ConfigToJson(trace.config)},
                    {"variant", VariantName(variant)},
                    {"failures", FailuresToJson(trace.failures)},
                    {"inputs", InputsToJson(trace.inputs)},
                    {"length", trace.length()}};
  out << header.dump() << '\n';
  for (const TimeStep& step : trace.steps) {
    Json procs = Json::array();
    for (ProcessId p = 1; p <= trace.config.n; ++p) {
      const auto& rec = step.at(p);
      if (!rec) {
        procs.push_back(nullptr);
        continue;
      }
      procs.push_back(Json{{"state", StateToJson(rec->state)},
                           {"horz", rec->horz},
                           {"reported", SetToJson(rec->reported_failures)},
                           {"fired", rec->fired},
                           {"check_two", rec->check_two_raised},
                           {"delivered", SetToJson(rec->delivered)}});
    }
    out << Json{{"k", step.k}, {"processes", std::move(procs)}}.dump() << '\n';
  }
}

Trace ReadTrace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail("empty trace");
  const Json header = Parse(line);
  CheckHeader(header, kTraceFormat);
  RejectUnknown(header,
                {"format", "version", "config", "variant", "failures",
                 "inputs", "length"},
                "trace header");
  Trace trace;
  trace.config = ConfigFromJson(Require(header, "config", "trace header"));
  trace.config.Validate();
  if (header.contains("variant")) {
    ParseVariant(Get<std::string>(header["variant"], "variant"));
  }
  trace.failures = FailuresFromJson(Require(header, "failures", "trace header"));
  trace.failures.Validate(trace.config);
  trace.inputs = InputsFromJson(Require(header, "inputs", "trace header"));
  const int length = Get<int>(Require(header, "length", "trace header"),
                              "length");
  if (length < 0) Fail("trace length must be non-negative");

  for (Time k = 0; k <= length; ++k) {
    if (!std::getline(in, line)) {
      Fail("trace ends at time " + std::to_string(k - 1) + " but declares " +
           std::to_string(length));
    }
    const Json row = Parse(line);
    RejectUnknown(row, {"k", "processes"}, "trace line");
    if (Get<int>(Require(row, "k", "trace line"), "k") != k) {
      Fail("trace line out of order at time " + std::to_string(k));
    }
    const Json& procs = Require(row, "processes", "trace line");
    if (!procs.is_array() ||
        static_cast<int>(procs.size()) != trace.config.n) {
      Fail("trace line " + std::to_string(k) + " must list all " +
           std::to_string(trace.config.n) + " processes");
    }
    TimeStep step;
    step.k = k;
    for (ProcessId p = 1; p <= trace.config.n; ++p) {
      const Json& rec = procs[p - 1];
      const bool alive = trace.failures.AliveAt(p, k);
      if (rec.is_null()) {
        if (alive) {
          Fail("process " + std::to_string(p) + " missing at time " +
               std::to_string(k));
        }
        step.processes.emplace_back();
        continue;
      }
      if (!alive) {
        Fail("crashed process " + std::to_string(p) + " recorded at time " +
             std::to_string(k));
      }
      RejectUnknown(rec,
                    {"state", "horz", "reported", "fired", "check_two",
                     "delivered"},
                    "process record");
      ProcessRecord r;
      r.state = StateFromJson(Require(rec, "state", "process record"));
      if (!IsSanitized(r.state, trace.config)) {
        Fail("state outside the variable domains at time " +
             std::to_string(k));
      }
      r.horz = Get<int>(Require(rec, "horz", "process record"), "horz");
      r.fired = Get<bool>(Require(rec, "fired", "process record"), "fired");
      if (rec.contains("reported")) {
        r.reported_failures = SetFromJson(rec["reported"], "reported");
      }
      if (rec.contains("check_two")) {
        r.check_two_raised = Get<std::uint64_t>(rec["check_two"], "check_two");
      }
      if (rec.contains("delivered")) {
        r.delivered = SetFromJson(rec["delivered"], "delivered");
      }
      step.processes.push_back(std::move(r));
    }
    trace.steps.push_back(std::move(step));
  }
  if (std::getline(in, line) && !line.empty()) {
    Fail("trailing content after time " + std::to_string(length));
  }
  return trace;
}

std::string VerdictToJson(const FsVerdict& v) {
  Json violations = Json::array();
  for (const Violation& x : v.violations) {
    violations.push_back(ViolationToJson(x));
  }
  const Json doc{{"stab", OptionalTime(v.stab)},
                 {"simultaneity_from", OptionalTime(v.simultaneity_from)},
                 {"liveness_from", OptionalTime(v.liveness_from)},
                 {"safety_from", OptionalTime(v.safety_from)},
                 {"fire_times", v.fire_times},
                 {"violations", std::move(violations)}};
  return doc.dump();
}

std::string FsCheckToJson(const FsCheck& check, Time from) {
  Json violations = Json::array();
  for (const Violation& x : check.violations) {
    violations.push_back(ViolationToJson(x));
  }
  return Json{{"from", from},
              {"decision", DecisionName(check.decision)},
              {"violations", std::move(violations)}}
      .dump();
}

std::string OracleToJson(const OracleTable& table) {
  Json rows = Json::array();
  for (const OracleRow& r : table.rows) {
    rows.push_back(Json{{"k", r.k},
                        {"x", r.x},
                        {"rh", r.rh},
                        {"ah", r.ah},
                        {"bb", r.bb},
                        {"clean", r.clean}});
  }
  return Json{{"config", ConfigToJson(table.config)},
              {"first_clean", table.first_clean},
              {"publication_time", table.at(0).bb},
              {"rows", std::move(rows)}}
      .dump();
}

std::string OracleToText(const OracleTable& table) {
  std::ostringstream os;
  os << std::setw(4) << "k" << std::setw(4) << "x" << std::setw(4) << "rh"
     << std::setw(4) << "ah" << std::setw(4) << "bb" << std::setw(7)
     << "clean" << '\n';
  for (const OracleRow& r : table.rows) {
    os << std::setw(4) << r.k << std::setw(4) << r.x << std::setw(4) << r.rh
       << std::setw(4) << r.ah << std::setw(4) << r.bb << std::setw(7)
       << (r.k == 0 ? "-" : r.clean ? "yes" : "no") << '\n';
  }
  os << "r_c = " << table.first_clean << '\n';
  os << "bb(F,0) = " << table.at(0).bb << '\n';
  return os.str();
}

SweepSpec ParseSweepSpec(std::string_view text) {
  const Json doc = Parse(text);
  CheckHeader(doc, kSweepFormat);
  RejectUnknown(doc,
                {"format", "version", "config", "max_crash_round",
                 "enumerate_blocked_subsets", "states", "input_policies",
                 "run_length", "variant", "pattern_limit",
                 "counterexamples_per_invariant", "tightness_witnesses"},
                "sweep spec");
  SweepSpec spec;
  spec.config = ConfigFromJson(Require(doc, "config", "sweep spec"));
  if (doc.contains("max_crash_round")) {
    spec.max_crash_round = Get<int>(doc["max_crash_round"], "max_crash_round");
  }
  if (doc.contains("enumerate_blocked_subsets")) {
    spec.enumerate_blocked_subsets =
        Get<bool>(doc["enumerate_blocked_subsets"], "enumerate_blocked_subsets");
  }
  if (doc.contains("states")) {
    const Json& st = doc["states"];
    RejectUnknown(st,
                  {"uniform_exhaustive", "joint_exhaustive_budget", "random",
                   "seed", "corpus"},
                  "states");
    if (st.contains("uniform_exhaustive")) {
      spec.states.uniform_exhaustive =
          Get<bool>(st["uniform_exhaustive"], "uniform_exhaustive");
    }
    if (st.contains("joint_exhaustive_budget")) {
      spec.states.joint_exhaustive_budget = Get<std::int64_t>(
          st["joint_exhaustive_budget"], "joint_exhaustive_budget");
    }
    if (st.contains("random")) {
      spec.states.random_joint = Get<int>(st["random"], "random");
    }
    if (st.contains("seed")) {
      spec.states.seed = Get<std::uint64_t>(st["seed"], "seed");
    }
    if (st.contains("corpus")) {
      spec.states.include_corpus = Get<bool>(st["corpus"], "corpus");
    }
  }
  if (doc.contains("input_policies")) {
    spec.input_policies.clear();
    for (const Json& p : doc["input_policies"]) {
      spec.input_policies.push_back(
          ParseInputPolicy(Get<std::string>(p, "input_policies")));
    }
  }
  if (doc.contains("run_length")) {
    spec.run_length = Get<int>(doc["run_length"], "run_length");
  }
  if (doc.contains("variant")) {
    spec.variant = ParseVariant(Get<std::string>(doc["variant"], "variant"));
  }
  if (doc.contains("pattern_limit") && !doc["pattern_limit"].is_null()) {
    spec.pattern_limit =
        Get<std::int64_t>(doc["pattern_limit"], "pattern_limit");
  }
  if (doc.contains("counterexamples_per_invariant")) {
    spec.counterexamples_per_invariant = Get<int>(
        doc["counterexamples_per_invariant"], "counterexamples_per_invariant");
  }
  if (doc.contains("tightness_witnesses")) {
    spec.tightness_witnesses =
        Get<bool>(doc["tightness_witnesses"], "tightness_witnesses");
  }
  spec.Validate();
  return spec;
}

std::string SerializeSweepSpec(const SweepSpec& spec) {
  Json policies = Json::array();
  for (InputPolicy p : spec.input_policies) policies.push_back(InputPolicyName(p));
  Json doc{{"format", kSweepFormat},
           {"version", kFormatVersion},
           {"config", ConfigToJson(spec.config)},
           {"max_crash_round", spec.max_crash_round},
           {"enumerate_blocked_subsets", spec.enumerate_blocked_subsets},
           {"states",
            Json{{"uniform_exhaustive", spec.states.uniform_exhaustive},
                 {"joint_exhaustive_budget",
                  spec.states.joint_exhaustive_budget},
                 {"random", spec.states.random_joint},
                 {"seed", spec.states.seed},
                 {"corpus", spec.states.include_corpus}}},
           {"input_policies", std::move(policies)},
           {"run_length", spec.run_length},
           {"variant", VariantName(spec.variant)}};
  doc["pattern_limit"] =
      spec.pattern_limit ? Json(*spec.pattern_limit) : Json(nullptr);
  doc["counterexamples_per_invariant"] = spec.counterexamples_per_invariant;
  doc["tightness_witnesses"] = spec.tightness_witnesses;
  return doc.dump(2) + "\n";
}

std::string SweepReportToJson(const SweepReport& report) {
  Json invariants = Json::array();
  for (const auto& [name, s] : report.invariants) {
    invariants.push_back(Json{{"invariant", name},
                              {"instances", s.instances},
                              {"violations", s.violations}});
  }
  Json counterexamples = Json::array();
  for (const Counterexample& c : report.counterexamples) {
    InitialStateSource source;
    source.kind = InitialStateSource::Kind::kExplicit;
    counterexamples.push_back(
        Json{{"invariant", c.invariant},
             {"time", c.time},
             {"detail", c.detail},
             {"variant", VariantName(c.variant)},
             {"policy", InputPolicyName(c.policy)},
             {"pattern_level", c.pattern_level},
             {"scenario", ScenarioToJson(c.scenario, source, true)}});
  }
  Json witnesses = Json::array();
  for (const TightnessWitness& w : report.witnesses) {
    Json states = Json::array();
    for (const ProcessState& s : w.states) states.push_back(StateToJson(s));
    witnesses.push_back(Json{{"failures", FailuresToJson(w.failures)},
                             {"publication_time", w.publication_time},
                             {"stab", OptionalTime(w.stab)},
                             {"first_fire", OptionalTime(w.first_fire)},
                             {"states", std::move(states)}});
  }
  Json offsets = Json::array();
  for (const auto& [offset, runs] : report.stab_offsets) {
    offsets.push_back(Json{{"offset", offset}, {"runs", runs}});
  }
  return Json{{"config", ConfigToJson(report.config)},
              {"variant", VariantName(report.variant)},
              {"patterns", report.patterns},
              {"scenarios_run", report.scenarios_run},
              {"total_violations", report.total_violations()},
              {"replayed", report.replayed},
              {"stab_offsets", std::move(offsets)},
              {"undecided_stab", report.undecided_stab},
              {"invariants", std::move(invariants)},
              {"counterexamples", std::move(counterexamples)},
              {"witnesses", std::move(witnesses)}}
      .dump();
}

std::string SweepReportToText(const SweepReport& report) {
  std::ostringstream os;
  os << "sweep n=" << report.config.n << " t=" << report.config.t
     << " variant=" << VariantName(report.variant) << '\n';
  os << "patterns " << report.patterns << ", scenarios " << report.scenarios_run
     << ", violations " << report.total_violations() << '\n';
  std::size_t width = 0;
  for (const auto& [name, s] : report.invariants) {
    width = std::max(width, name.size());
  }
  for (const auto& [name, s] : report.invariants) {
    os << "  " << std::left << std::setw(static_cast<int>(width)) << name
       << std::right << std::setw(12) << s.instances << " checked"
       << std::setw(10) << s.violations << " failed\n";
  }
  os << "stab - bb(F,0):";
  for (const auto& [offset, runs] : report.stab_offsets) {
    os << ' ' << offset << " x" << runs;
  }
  if (report.undecided_stab > 0) os << ", undecided x" << report.undecided_stab;
  os << '\n';
  for (const Counterexample& c : report.counterexamples) {
    os << "counterexample " << c.invariant << " at " << c.time << ": "
       << c.detail << " [" << c.scenario.label << "]\n";
  }
  if (!report.counterexamples.empty()) {
    os << report.replayed << "/" << report.counterexamples.size()
       << " counterexamples replayed\n";
  }
  return os.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace firesquad
