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

#ifndef FIRESQUAD_CHECKER_H_
#define FIRESQUAD_CHECKER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "firesquad/engine.h"
#include "firesquad/types.h"

namespace firesquad {

enum class Property { kSimultaneity, kLiveness, kSafety };

std::string_view PropertyName(Property p);

struct Violation {
  Property property;
  Time time;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct CheckOptions {
  // Rounds within which a GO at a never-faulty process must be answered by
  // that process firing. Defaults to t+1.
  std::optional<int> liveness_bound;

  int LivenessBound(const Config& config) const {
    return liveness_bound.value_or(config.t + 1);
  }
};

enum class Decision { kHolds, kViolated, kUndecided };

std::string_view DecisionName(Decision d);

// Per-property earliest times from which each property holds on the trace,
// and their max, the stabilization time. A trace is finite, so every value
// is relative to the observed window; a value is nullopt ("undecided") when
// the window cannot certify it.
struct FsVerdict {
  std::optional<Time> simultaneity_from;
  std::optional<Time> liveness_from;
  std::optional<Time> safety_from;
  std::optional<Time> stab;
  // Every violation in the trace. Simultaneity entries are per fire time,
  // liveness entries per unanswered GO, safety entries per time k' at which
  // fires in [0, k'] outnumber GO times in [0, k').
  std::vector<Violation> violations;
  std::vector<Time> fire_times;
};

FsVerdict Evaluate(const Trace& trace, const CheckOptions& options = {});

struct FsCheck {
  Decision decision = Decision::kUndecided;
  std::vector<Violation> violations;
};

// Whether FS(k) holds on the trace. Undecided when no violation is seen but
// the trace ends before k + liveness bound, or a GO at or after k has no
// answer yet and its deadline lies past the end of the trace.
FsCheck CheckFs(const Trace& trace, Time k, const CheckOptions& options = {});

std::optional<Time> StabilizationTime(const Trace& trace,
                                      const CheckOptions& options = {});

// Number of times in [stab, k] with at least one fire. Undecided when stab
// is, or when k lies past the end of the trace.
std::optional<int> FireCount(const Trace& trace, std::optional<Time> stab,
                             Time k);

// (i) no GO before stab, (ii) GOs only at never-faulty processes, (iii) a
// fire strictly after each GO time and no later than the next one.
std::optional<bool> IsSequential(const Trace& trace, std::optional<Time> stab);

enum class GoPolicy {
  kNone,
  // A single GO at the first allowed time.
  kOnceEarliest,
  // A GO at the first allowed time after each answering fire.
  kAfterEachFire,
  // Like kAfterEachFire, but each allowed time is taken with probability
  // 1/2 and the target is a uniformly chosen never-faulty process.
  kRandomDelay,
};

std::string_view GoPolicyName(GoPolicy p);
GoPolicy ParseGoPolicy(std::string_view name);

struct DriverOptions {
  GoPolicy policy = GoPolicy::kNone;
  int max_gos = 1;
  // No GO is injected before this time.
  Time stab_bound = 0;
  Time length = 0;
  // No GO is injected after this time; defaults to length - (t+1) so every
  // GO has a decidable answer.
  std::optional<Time> last_go_time;
  // Seeds std::mt19937_64; only kRandomDelay draws from it.
  std::uint64_t seed = 0;
  Variant variant = Variant::kFireSquad;
};

struct DriverResult {
  InputPattern inputs;
  Trace trace;
};

// Co-runs the simulator and injects GOs online so the resulting input is
// sequential: never before stab_bound, only to never-faulty processes, and
// only once every earlier GO has been followed by a fire.
DriverResult RunSequential(const Config& config, const FailurePattern& failures,
                           const std::vector<ProcessState>& initial_states,
                           const DriverOptions& options);

struct SwiftnessVerdict {
  Decision decision = Decision::kUndecided;
  // Times k where #A(k) < #B(k).
  std::vector<Time> deficits;
  // First k where #A(k) > #B(k), if any.
  std::optional<Time> first_lead;
};

// Whether run A is at least as swift as run B: #A(k) >= #B(k) for every k
// both traces cover. Both runs must share the failure and input patterns.
SwiftnessVerdict CompareSwiftness(const Trace& a, std::optional<Time> stab_a,
                                  const Trace& b, std::optional<Time> stab_b);

}  // namespace firesquad

#endif  // FIRESQUAD_CHECKER_H_
