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

#include "firesquad/engine.h"

#include <utility>

#include "firesquad/oracle.h"

namespace firesquad {

void Scenario::Validate() const {
  config.Validate();
  failures.Validate(config);
  if (static_cast<int>(initial_states.size()) != config.n) {
    throw ValidationError("expected " + std::to_string(config.n) +
                          " initial states, got " +
                          std::to_string(initial_states.size()));
  }
  for (std::size_t i = 0; i < initial_states.size(); ++i) {
    if (!IsSanitized(initial_states[i], config)) {
      throw ValidationError("initial state of process " +
                            std::to_string(i + 1) + " is not sanitized");
    }
  }
  for (const auto& [k, set] : inputs.entries()) {
    if (!set.IsSubsetOf(config.processes())) {
      throw ValidationError("input at time " + std::to_string(k) +
                            " names an unknown process");
    }
  }
  if (length < 0) throw ValidationError("run length must be non-negative");
}

ProcessSet TimeStep::fires() const {
  ProcessSet out;
  for (std::size_t i = 0; i < processes.size(); ++i) {
    if (processes[i] && processes[i]->fired) {
      out.insert(static_cast<ProcessId>(i) + 1);
    }
  }
  return out;
}

ProcessSet TimeStep::alive() const {
  ProcessSet out;
  for (std::size_t i = 0; i < processes.size(); ++i) {
    if (processes[i]) out.insert(static_cast<ProcessId>(i) + 1);
  }
  return out;
}

Simulator::Simulator(Config config, FailurePattern failures,
                     const std::vector<ProcessState>& initial_states,
                     ProcessSet inputs_at_zero, Variant variant)
    : variant_(variant) {
  trace_.config = config;
  trace_.failures = std::move(failures);
  TimeStep zero;
  zero.k = 0;
  zero.processes.resize(config.n);
  for (ProcessId p = 1; p <= config.n; ++p) {
    if (!trace_.failures.AliveAt(p, 0)) continue;
    ProcessRecord rec;
    rec.state = initial_states[p - 1];
    // The time-0 input is assigned exactly as a step would.
    rec.state.req[0] = inputs_at_zero.contains(p) ? 1 : 0;
    if (inputs_at_zero.contains(p)) trace_.inputs.AddGo(0, p);
    zero.processes[p - 1] = std::move(rec);
  }
  trace_.steps.push_back(std::move(zero));
}

void Simulator::Advance(ProcessSet inputs) {
  const Config& config = trace_.config;
  const TimeStep& prev = trace_.steps.back();
  const int round = prev.k + 1;

  TimeStep next;
  next.k = round;
  next.processes.resize(config.n);
  std::vector<Inbound> inbox;
  inbox.reserve(config.n);
  for (ProcessId p = 1; p <= config.n; ++p) {
    if (!trace_.failures.AliveAt(p, round)) continue;
    inbox.clear();
    ProcessSet delivered;
    for (ProcessId q = 1; q <= config.n; ++q) {
      const auto& sender = prev.at(q);
      if (!sender || !trace_.failures.Delivers(q, p, round)) continue;
      inbox.push_back(Inbound{q, &sender->state});
      delivered.insert(q);
    }
    const int input = inputs.contains(p) ? 1 : 0;
    if (input) trace_.inputs.AddGo(round, p);
    StepOutcome out =
        Step(p, prev.at(p)->state, inbox, input, config, variant_);
    ProcessRecord rec;
    rec.state = std::move(out.state);
    rec.horz = out.horz;
    rec.reported_failures = out.reported_failures;
    rec.fired = out.fired;
    rec.check_two_raised = out.check_two_raised;
    rec.delivered = delivered;
    next.processes[p - 1] = std::move(rec);
  }
  trace_.steps.push_back(std::move(next));
}

Trace Run(const Scenario& scenario, Variant variant) {
  scenario.Validate();
  Simulator sim(scenario.config, scenario.failures, scenario.initial_states,
                scenario.inputs.GoAt(0), variant);
  for (Time k = 1; k <= scenario.length; ++k) {
    sim.Advance(scenario.inputs.GoAt(k));
  }
  Trace trace = std::move(sim).TakeTrace();
  // Keep inputs addressed to crashed processes too; they are part of I.
  trace.inputs = scenario.inputs;
  return trace;
}

Scenario ReplaySuffix(const Trace& trace, Time k) {
  if (k < 0 || k > trace.length()) {
    throw ValidationError("suffix time " + std::to_string(k) +
                          " outside trace [0, " +
                          std::to_string(trace.length()) + "]");
  }
  Scenario s;
  s.config = trace.config;
  s.failures = trace.failures.Shifted(k);
  s.inputs = trace.inputs.Shifted(k);
  s.length = trace.length() - k;
  s.label = "suffix@" + std::to_string(k);
  s.initial_states.resize(trace.config.n);
  for (ProcessId p = 1; p <= trace.config.n; ++p) {
    for (Time j = k; j >= 0; --j) {
      if (const auto& rec = trace.at(j).at(p)) {
        s.initial_states[p - 1] = rec->state;
        break;
      }
    }
    if (s.initial_states[p - 1].req.empty()) {
      s.initial_states[p - 1] = CanonicalState(trace.config);
    }
  }
  return s;
}

int DefaultRunLength(const Config& config, const FailurePattern& failures,
                     const InputPattern& inputs) {
  const int bb0 = PublicationTime(failures, config, 0);
  return bb0 + 2 * (config.t + 1) + inputs.LastGoTime().value_or(0);
}

}  // namespace firesquad
