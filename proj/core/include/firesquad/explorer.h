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

#ifndef FIRESQUAD_EXPLORER_H_
#define FIRESQUAD_EXPLORER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "firesquad/checker.h"
#include "firesquad/engine.h"
#include "firesquad/oracle.h"
#include "firesquad/protocol.h"
#include "firesquad/types.h"

namespace firesquad {

// Thrown when an enumeration would exceed its budget. `estimate` is the size
// the enumeration would have had.
class BudgetExceeded : public ValidationError {
 public:
  BudgetExceeded(const std::string& what, std::int64_t estimate)
      : ValidationError(what), estimate_(estimate) {}
  std::int64_t estimate() const { return estimate_; }

 private:
  std::int64_t estimate_;
};

// ---------------------------------------------------------------------------
// Failure patterns.

// Number of patterns EnumerateFailurePatterns would produce.
std::int64_t CountFailurePatterns(const Config& config, int max_crash_round,
                                  bool enumerate_blocked_subsets = true);

// All patterns with at most t crashes in rounds [1, max_crash_round]. A crash
// in round r may block any subset of the peers still alive at time r-1 (or,
// without subset enumeration, none or all of them). Ordered by crash count,
// then crashing processes, then rounds, then blocked masks.
std::vector<FailurePattern> EnumerateFailurePatterns(
    const Config& config, int max_crash_round,
    bool enumerate_blocked_subsets = true,
    std::int64_t budget = 5'000'000);

// ---------------------------------------------------------------------------
// Initial states.

// |{0,1}^(t+2)| * |[0,t+1]^(t+1)| * |subsets of P|.
std::int64_t PerProcessStateCount(const Config& config);

// The state with the given index in [0, PerProcessStateCount).
ProcessState PerProcessState(const Config& config, std::int64_t index);

ProcessState RandomProcessState(const Config& config, std::mt19937_64& rng);

using JointState = std::vector<ProcessState>;

// Hand-picked hostile starts: canonical, every req bit set, all-zero views,
// fire-immediately (top req bit, view[0]=0), fail sets naming every peer,
// and per-process mixtures of these.
std::vector<JointState> AdversarialCorpus(const Config& config);

struct StateSampling {
  // Every per-process state, applied uniformly to all processes.
  bool uniform_exhaustive = false;
  // Every joint state, if PerProcessStateCount^n does not exceed this.
  std::int64_t joint_exhaustive_budget = 0;
  int random_joint = 0;
  std::uint64_t seed = 0;
  bool include_corpus = true;
};

// The corpus, then uniform states, then joint states, then random ones.
std::vector<JointState> AdversarialStates(const Config& config,
                                          const StateSampling& sampling);

// ---------------------------------------------------------------------------
// Sweeps.

enum class InputPolicy {
  kNone,
  // No GOs; every process starts with all req entries above 0 set.
  kPhantom,
  // One GO at a time and process cycled over the scenario index.
  kOneGo,
  // GOs injected online by RunSequential from time t+1 on.
  kSequential,
};

std::string_view InputPolicyName(InputPolicy p);
InputPolicy ParseInputPolicy(std::string_view name);

struct SweepSpec {
  Config config;
  int max_crash_round = 1;
  bool enumerate_blocked_subsets = true;
  StateSampling states;
  std::vector<InputPolicy> input_policies = {InputPolicy::kNone};
  int run_length = 10;
  Variant variant = Variant::kFireSquad;
  int jobs = 1;
  // If set, only this many failure patterns, drawn evenly over the
  // enumeration, are explored.
  std::optional<std::int64_t> pattern_limit;
  int counterexamples_per_invariant = 3;
  bool tightness_witnesses = true;

  void Validate() const;
};

struct InvariantStats {
  std::int64_t instances = 0;
  std::int64_t violations = 0;

  friend bool operator==(const InvariantStats&,
                         const InvariantStats&) = default;
};

struct Counterexample {
  std::string invariant;
  Scenario scenario;
  Variant variant = Variant::kFireSquad;
  InputPolicy policy = InputPolicy::kNone;
  // Pattern-level counterexamples are replayed by recomputing the pattern
  // checks, not by re-running the scenario.
  bool pattern_level = false;
  Time time = 0;
  std::string detail;
};

// A start (s, I=empty) built by running one failure-free round from the
// canonical state with a GO, then handing the resulting state to F.
struct TightnessWitness {
  FailurePattern failures;
  JointState states;
  int publication_time = 0;  // bb(F,0)
  std::optional<Time> stab;
  std::optional<Time> first_fire;
};

TightnessWitness BuildTightnessWitness(const Config& config,
                                       const FailurePattern& failures,
                                       int run_length,
                                       Variant variant = Variant::kFireSquad);

struct SweepReport {
  Config config;
  Variant variant = Variant::kFireSquad;
  std::int64_t patterns = 0;
  std::int64_t scenarios_run = 0;
  // Keyed by invariant name.
  std::map<std::string, InvariantStats> invariants;
  std::vector<Counterexample> counterexamples;
  std::vector<TightnessWitness> witnesses;
  // Counterexamples that reproduced identically when re-run.
  std::int64_t replayed = 0;
  // stab - bb(F,0) -> number of runs with that offset; runs whose stab the
  // window cannot decide are counted separately.
  std::map<int, std::int64_t> stab_offsets;
  std::int64_t undecided_stab = 0;

  std::int64_t total_violations() const;
  const InvariantStats& stats(const std::string& name) const;
};

// Names of every invariant the sweep evaluates, in report order.
const std::vector<std::string>& InvariantCatalog();

// Facts about one failure pattern that the per-run invariants consult.
struct PatternFacts {
  Config config;
  FailurePattern failures;
  OracleTable oracle;
  int publication_time = 0;  // bb(F,0)
  int first_clean = 0;       // r_c

  static PatternFacts Compute(const Config& config,
                              const FailurePattern& failures, int run_length);
};

struct RunContext {
  const PatternFacts* facts = nullptr;
  InputPolicy policy = InputPolicy::kNone;
  const JointState* initial_states = nullptr;
  Variant variant = Variant::kFireSquad;
  std::string label;
};

// Evaluates every per-run invariant on `trace`. Stats go to `report`, along
// with at most `counterexample_cap` counterexamples per invariant.
void CheckRunInvariants(const Trace& trace, const RunContext& context,
                        SweepReport& report, int counterexample_cap);

// Pattern-level invariants (oracle consistency, tightness witness).
void CheckPatternInvariants(const PatternFacts& facts, int run_length,
                            bool build_witness, Variant variant,
                            SweepReport& report, int counterexample_cap);

SweepReport Sweep(const SweepSpec& spec);

// Re-runs a counterexample and reports whether the same invariant fails at
// the same time.
bool Replays(const Counterexample& counterexample);

}  // namespace firesquad

#endif  // FIRESQUAD_EXPLORER_H_
