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

#include <benchmark/benchmark.h>

#include <vector>

#include "firesquad/checker.h"
#include "firesquad/engine.h"
#include "firesquad/explorer.h"
#include "firesquad/oracle.h"
#include "firesquad/protocol.h"

namespace firesquad {
namespace {

Config ConfigFor(const benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return {n, n - 2};
}

void BM_Step(benchmark::State& state) {
  const Config c = ConfigFor(state);
  const ProcessState s = CanonicalState(c);
  std::vector<Inbound> received;
  for (ProcessId p = 1; p <= c.n; ++p) received.push_back({p, &s});
  for (auto _ : state) {
    benchmark::DoNotOptimize(Step(1, s, received, 1, c));
  }
}
BENCHMARK(BM_Step)->Arg(3)->Arg(5)->Arg(8)->Arg(16);

Scenario BusyScenario(const Config& c) {
  Scenario s;
  s.config = c;
  for (ProcessId p = 1; p <= c.t; ++p) {
    ProcessSet blocked;
    for (ProcessId q = p + 1; q <= c.n; q += 2) blocked.insert(q);
    s.failures.AddCrash(p, p, blocked);
  }
  s.inputs.AddGo(0, c.n);
  s.inputs.AddGo(c.t + 2, c.n);
  s.initial_states.assign(c.n, CanonicalState(c));
  s.length = 4 * (c.t + 1);
  return s;
}

void BM_RunAndEvaluate(benchmark::State& state) {
  const Scenario s = BusyScenario(ConfigFor(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(Run(s)));
  }
}
BENCHMARK(BM_RunAndEvaluate)->Arg(3)->Arg(5)->Arg(8);

void BM_Oracle(benchmark::State& state) {
  const Config c = ConfigFor(state);
  const Scenario s = BusyScenario(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeOracle(s.failures, c, 3 * (c.t + 1)));
  }
}
BENCHMARK(BM_Oracle)->Arg(3)->Arg(5)->Arg(8);

void BM_Sweep(benchmark::State& state) {
  SweepSpec spec;
  spec.config = {3, 1};
  spec.max_crash_round = 2;
  spec.states.random_joint = static_cast<int>(state.range(0));
  spec.input_policies = {InputPolicy::kNone, InputPolicy::kOneGo};
  spec.jobs = 1;
  std::int64_t scenarios = 0;
  for (auto _ : state) {
    scenarios += Sweep(spec).scenarios_run;
  }
  state.counters["scenarios/s"] =
      benchmark::Counter(static_cast<double>(scenarios),
                         benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Sweep)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace firesquad

BENCHMARK_MAIN();
