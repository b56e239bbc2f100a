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

#ifndef FIRESQUAD_ENGINE_H_
#define FIRESQUAD_ENGINE_H_

#include <optional>
#include <string>
#include <vector>

#include "firesquad/protocol.h"
#include "firesquad/types.h"

namespace firesquad {

// Everything needed to reproduce a run.
struct Scenario {
  Config config;
  FailurePattern failures;
  InputPattern inputs;
  // Indexed by process id - 1; must be sanitized.
  std::vector<ProcessState> initial_states;
  // Number of rounds to simulate.
  int length = 0;
  std::string label;

  // Throws ValidationError on any inconsistency.
  void Validate() const;
};

// What one live process did at one time.
struct ProcessRecord {
  ProcessState state;
  // 0 at time 0, where no step runs.
  int horz = 0;
  ProcessSet reported_failures;
  bool fired = false;
  std::uint64_t check_two_raised = 0;
  // Senders heard from in the round ending at this time (empty at time 0).
  ProcessSet delivered;
};

struct TimeStep {
  Time k = 0;
  // Indexed by process id - 1; empty for processes crashed by time k.
  std::vector<std::optional<ProcessRecord>> processes;

  const std::optional<ProcessRecord>& at(ProcessId p) const {
    return processes[p - 1];
  }
  ProcessSet fires() const;
  ProcessSet alive() const;
};

struct Trace {
  Config config;
  FailurePattern failures;
  InputPattern inputs;
  std::vector<TimeStep> steps;  // steps[k] is time k, for k in [0, length]

  int length() const { return static_cast<int>(steps.size()) - 1; }
  const TimeStep& at(Time k) const { return steps[k]; }
  bool FiredAt(Time k) const { return !steps[k].fires().empty(); }
};

// Lockstep executor. Time 0 loads the initial states (req[0] is set to the
// time-0 input) and runs no step body; each Advance() performs one
// communication round followed by the step of every process alive after it.
class Simulator {
 public:
  Simulator(Config config, FailurePattern failures,
            const std::vector<ProcessState>& initial_states,
            ProcessSet inputs_at_zero, Variant variant = Variant::kFireSquad);

  // Runs round time()+1 with the given GO inputs for its end time.
  void Advance(ProcessSet inputs);

  Time time() const { return trace_.length(); }
  const Trace& trace() const { return trace_; }
  Trace TakeTrace() && { return std::move(trace_); }

 private:
  Variant variant_;
  Trace trace_;
};

Trace Run(const Scenario& scenario, Variant variant = Variant::kFireSquad);

// Scenario continuing `trace` from time k: states at time k become initial
// states and the failure and input patterns are shifted by k. Processes
// already crashed keep their last recorded state as a placeholder.
Scenario ReplaySuffix(const Trace& trace, Time k);

// Default run length: bb(F,0) + 2(t+1) + last GO time.
int DefaultRunLength(const Config& config, const FailurePattern& failures,
                     const InputPattern& inputs);

}  // namespace firesquad

#endif  // FIRESQUAD_ENGINE_H_
