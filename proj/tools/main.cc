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

// firesquad: run, check and sweep FIRE-SQUAD scenarios.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "firesquad/checker.h"
#include "firesquad/engine.h"
#include "firesquad/explorer.h"
#include "firesquad/io.h"
#include "firesquad/oracle.h"

namespace {

constexpr int kClean = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

using firesquad::Time;

std::string JoinTimes(const std::vector<Time>& times) {
  std::ostringstream os;
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << (i ? "," : "") << times[i];
  }
  return os.str();
}

std::string Show(const std::optional<Time>& t) {
  return t ? std::to_string(*t) : "undecided";
}

void PrintViolations(std::ostream& os,
                     const std::vector<firesquad::Violation>& violations,
                     std::optional<Time> stab) {
  for (const firesquad::Violation& v : violations) {
    os << "  " << firesquad::PropertyName(v.property) << " at " << v.time
       << ": " << v.detail;
    if (stab && v.time < *stab) os << " (before stabilization)";
    os << '\n';
  }
}

// Violations only count against a run when the window cannot place them all
// before a stabilization time.
int VerdictStatus(const firesquad::FsVerdict& v) {
  return !v.stab && !v.violations.empty() ? kViolation : kClean;
}

int CmdRun(const std::string& scenario_path, const std::string& trace_path,
           bool verdict, const std::string& variant_name) {
  const firesquad::ScenarioFile file =
      firesquad::ParseScenario(firesquad::ReadFile(scenario_path));
  const firesquad::Variant variant = firesquad::ParseVariant(variant_name);
  const firesquad::Trace trace = firesquad::Run(file.scenario, variant);
  if (!trace_path.empty()) {
    if (trace_path == "-") {
      firesquad::WriteTrace(std::cout, trace, variant);
    } else {
      std::ofstream out(trace_path);
      if (!out) throw firesquad::ParseError("cannot write " + trace_path);
      firesquad::WriteTrace(out, trace, variant);
    }
  }
  const firesquad::FsVerdict v = firesquad::Evaluate(trace);
  std::ostream& os = trace_path == "-" ? std::cerr : std::cout;
  if (verdict) {
    os << "stab " << Show(v.stab) << "; fires at [" << JoinTimes(v.fire_times)
       << "]; simultaneity from " << Show(v.simultaneity_from)
       << ", liveness from " << Show(v.liveness_from) << ", safety from "
       << Show(v.safety_from) << '\n';
    PrintViolations(os, v.violations, v.stab);
    os << firesquad::VerdictToJson(v) << '\n';
  } else if (trace_path != "-") {
    os << "ran " << trace.length() << " rounds; fires at ["
       << JoinTimes(v.fire_times) << "]\n";
  }
  return VerdictStatus(v);
}

int CmdOracle(const std::string& path, std::optional<int> n,
              std::optional<int> t, std::optional<int> horizon) {
  const firesquad::FailureFile file =
      firesquad::ParseFailures(firesquad::ReadFile(path));
  firesquad::Config config;
  if (file.config) config = *file.config;
  if (n) config.n = *n;
  if (t) config.t = *t;
  if (!file.config && (!n || !t)) {
    throw firesquad::ValidationError(
        "--n and --t are required for a bare failure list");
  }
  config.Validate();
  file.failures.Validate(config);
  const int k = horizon.value_or(3 * (config.t + 1));
  const firesquad::OracleTable table =
      firesquad::ComputeOracle(file.failures, config, k);
  std::cout << firesquad::OracleToText(table);
  std::cout << firesquad::OracleToJson(table) << '\n';
  return kClean;
}

int CmdCheck(const std::string& path, std::optional<int> from) {
  firesquad::Trace trace;
  if (path == "-") {
    trace = firesquad::ReadTrace(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw firesquad::ParseError("cannot open " + path);
    trace = firesquad::ReadTrace(in);
  }
  const Time k = from.value_or(trace.config.t + 1);
  const firesquad::FsCheck check = firesquad::CheckFs(trace, k);
  const firesquad::FsVerdict v = firesquad::Evaluate(trace);
  std::cout << "FS(" << k << ") " << firesquad::DecisionName(check.decision)
            << "; stab " << Show(v.stab) << "; fires at ["
            << JoinTimes(v.fire_times) << "]\n";
  PrintViolations(std::cout, check.violations, std::nullopt);
  std::cout << firesquad::FsCheckToJson(check, k) << '\n';
  std::cout << firesquad::VerdictToJson(v) << '\n';
  return check.decision == firesquad::Decision::kViolated ? kViolation
                                                          : kClean;
}

int CmdSweep(const std::string& path, int jobs, std::optional<std::uint64_t> seed,
             const std::string& report_path) {
  firesquad::SweepSpec spec =
      firesquad::ParseSweepSpec(firesquad::ReadFile(path));
  spec.jobs = jobs;
  if (seed) spec.states.seed = *seed;
  const firesquad::SweepReport report = firesquad::Sweep(spec);
  std::cout << firesquad::SweepReportToText(report);
  const std::string json = firesquad::SweepReportToJson(report);
  if (report_path.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream out(report_path);
    if (!out) throw firesquad::ParseError("cannot write " + report_path);
    out << json << '\n';
  }
  return report.total_violations() == 0 ? kClean : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FIRE-SQUAD self-stabilizing firing squad simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string trace_out;
  bool verdict = false;
  std::string variant = "fire-squad";
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--trace", trace_out, "Write the JSONL trace here ('-' for stdout)");
  run->add_flag("--verdict", verdict, "Print the checker verdict");
  run->add_option("--variant", variant,
                  "fire-squad, without-check-1, without-check-2, fixed-delay");

  std::string failures_path;
  std::optional<int> n;
  std::optional<int> t;
  std::optional<int> horizon;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Print horizons and publication times");
  oracle->add_option("failures", failures_path,
                     "Failure list or scenario JSON")
      ->required();
  oracle->add_option("--n", n, "Number of processes");
  oracle->add_option("--t", t, "Crash bound");
  oracle->add_option("--horizon", horizon, "Last time in the table");

  std::string trace_in;
  std::optional<int> from;
  CLI::App* check = app.add_subcommand("check", "Check FS(k) on a trace");
  check->add_option("trace", trace_in, "JSONL trace ('-' for stdin)")
      ->required();
  check->add_option("--from", from, "k in FS(k); defaults to t+1");

  std::string spec_path;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string report_path;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep spec");
  sweep->add_option("spec", spec_path, "Sweep spec JSON")->required();
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Overrides the spec's state seed");
  sweep->add_option("--report", report_path,
                    "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return CmdRun(scenario_path, trace_out, verdict, variant);
    if (*oracle) return CmdOracle(failures_path, n, t, horizon);
    if (*check) return CmdCheck(trace_in, from);
    if (*sweep) return CmdSweep(spec_path, jobs, seed, report_path);
  } catch (const firesquad::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
