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

#include "firesquad/checker.h"

#include <algorithm>
#include <random>
#include <sstream>

namespace firesquad {

std::string_view PropertyName(Property p) {
  switch (p) {
    case Property::kSimultaneity:
      return "simultaneity";
    case Property::kLiveness:
      return "liveness";
    case Property::kSafety:
      return "safety";
  }
  return "unknown";
}

std::string_view DecisionName(Decision d) {
  switch (d) {
    case Decision::kHolds:
      return "holds";
    case Decision::kViolated:
      return "violated";
    case Decision::kUndecided:
      return "undecided";
  }
  return "unknown";
}

namespace {

// Fire and GO occupancy of a trace, with prefix counts for the safety
// inequality.
struct Timeline {
  int length = 0;
  std::vector<char> fired;     // [0, length]
  std::vector<int> fires_upto;  // fires in [0, k]
  std::vector<int> gos_before;  // GO times in [0, k)

  explicit Timeline(const Trace& trace) : length(trace.length()) {
    fired.resize(length + 1);
    fires_upto.resize(length + 1);
    gos_before.resize(length + 2);
    int fires = 0;
    int gos = 0;
    for (Time k = 0; k <= length; ++k) {
      gos_before[k] = gos;
      if (trace.inputs.AnyGoAt(k)) ++gos;
      fired[k] = trace.FiredAt(k) ? 1 : 0;
      fires += fired[k];
      fires_upto[k] = fires;
    }
    gos_before[length + 1] = gos;
  }

  int FiresBetween(Time from, Time to) const {
    return fires_upto[to] - (from > 0 ? fires_upto[from - 1] : 0);
  }
};

std::vector<Violation> SimultaneityViolations(const Trace& trace, Time from) {
  std::vector<Violation> out;
  const ProcessSet forever = trace.failures.AliveForever(trace.config);
  for (Time k = std::max(from, 0); k <= trace.length(); ++k) {
    const ProcessSet fires = trace.at(k).fires();
    if (fires.empty()) continue;
    const ProcessSet missing = forever - fires;
    if (missing.empty()) continue;
    out.push_back({Property::kSimultaneity, k,
                   "fired " + ToString(fires) + " but not " +
                       ToString(missing)});
  }
  return out;
}

struct LivenessScan {
  std::vector<Violation> violations;
  // GO times whose deadline lies past the end of the trace.
  std::vector<Time> pending;
};

LivenessScan ScanLiveness(const Trace& trace, Time from, int bound) {
  LivenessScan out;
  const ProcessSet forever = trace.failures.AliveForever(trace.config);
  const int length = trace.length();
  for (const auto& [g, targets] : trace.inputs.entries()) {
    if (g < from) continue;
    for (ProcessId p : (targets & forever).members()) {
      bool answered = false;
      for (Time k = g + 1; k <= std::min(g + bound, length); ++k) {
        const auto& rec = trace.at(k).at(p);
        if (rec && rec->fired) {
          answered = true;
          break;
        }
      }
      if (answered) continue;
      if (g + bound <= length) {
        std::ostringstream os;
        os << "GO at process " << p << " not answered by time "
           << g + bound;
        out.violations.push_back({Property::kLiveness, g, os.str()});
      } else {
        out.pending.push_back(g);
      }
    }
  }
  return out;
}

std::vector<Violation> SafetyViolations(const Timeline& tl, Time from) {
  std::vector<Violation> out;
  for (Time k = std::max(from, 0); k <= tl.length; ++k) {
    if (!tl.fired[k]) continue;
    const int fires = tl.FiresBetween(from, k);
    const int gos = tl.gos_before[k];
    if (fires > gos) {
      std::ostringstream os;
      os << fires << " fire time(s) in [" << from << "," << k << "] but "
         << gos << " GO time(s) in [0," << k << ")";
      out.push_back({Property::kSafety, k, os.str()});
    }
  }
  return out;
}

}  // namespace

FsCheck CheckFs(const Trace& trace, Time k, const CheckOptions& options) {
  const int bound = options.LivenessBound(trace.config);
  FsCheck out;
  const Timeline tl(trace);
  out.violations = SimultaneityViolations(trace, k);
  LivenessScan live = ScanLiveness(trace, k, bound);
  out.violations.insert(out.violations.end(), live.violations.begin(),
                        live.violations.end());
  std::vector<Violation> safety = SafetyViolations(tl, k);
  out.violations.insert(out.violations.end(), safety.begin(), safety.end());
  if (!out.violations.empty()) {
    out.decision = Decision::kViolated;
  } else if (!live.pending.empty() || trace.length() < k + bound) {
    out.decision = Decision::kUndecided;
  } else {
    out.decision = Decision::kHolds;
  }
  return out;
}

FsVerdict Evaluate(const Trace& trace, const CheckOptions& options) {
  const int bound = options.LivenessBound(trace.config);
  const int length = trace.length();
  const Timeline tl(trace);
  FsVerdict v;
  for (Time k = 0; k <= length; ++k) {
    if (tl.fired[k]) v.fire_times.push_back(k);
  }

  std::vector<Violation> sim = SimultaneityViolations(trace, 0);
  v.simultaneity_from = sim.empty() ? 0 : sim.back().time + 1;

  LivenessScan live = ScanLiveness(trace, 0, bound);
  if (live.pending.empty()) {
    Time last = -1;
    for (const Violation& x : live.violations) last = std::max(last, x.time);
    v.liveness_from = last + 1;
  }

  Time safe_from = length + 1;
  for (Time k = 0; k <= length; ++k) {
    if (SafetyViolations(tl, k).empty()) {
      safe_from = k;
      break;
    }
  }
  v.safety_from = safe_from;

  v.violations = std::move(sim);
  v.violations.insert(v.violations.end(), live.violations.begin(),
                      live.violations.end());
  std::vector<Violation> safety = SafetyViolations(tl, 0);
  v.violations.insert(v.violations.end(), safety.begin(), safety.end());
  std::stable_sort(v.violations.begin(), v.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return a.time < b.time;
                   });

  if (v.simultaneity_from && v.liveness_from && v.safety_from) {
    const Time stab =
        std::max({*v.simultaneity_from, *v.liveness_from, *v.safety_from});
    if (stab + bound <= length) v.stab = stab;
  }
  return v;
}

std::optional<Time> StabilizationTime(const Trace& trace,
                                      const CheckOptions& options) {
  return Evaluate(trace, options).stab;
}

std::optional<int> FireCount(const Trace& trace, std::optional<Time> stab,
                             Time k) {
  if (!stab || k > trace.length()) return std::nullopt;
  int count = 0;
  for (Time j = *stab; j <= k; ++j) {
    if (trace.FiredAt(j)) ++count;
  }
  return count;
}

std::optional<bool> IsSequential(const Trace& trace,
                                 std::optional<Time> stab) {
  if (!stab) return std::nullopt;
  const ProcessSet forever = trace.failures.AliveForever(trace.config);
  const std::vector<Time> gos = trace.inputs.GoTimes();
  for (Time g : gos) {
    if (g < *stab) return false;
    if (!trace.inputs.GoAt(g).IsSubsetOf(forever)) return false;
  }
  for (std::size_t i = 0; i + 1 < gos.size(); ++i) {
    if (gos[i + 1] > trace.length()) return std::nullopt;
    bool fired = false;
    for (Time k = gos[i] + 1; k <= gos[i + 1]; ++k) {
      if (trace.FiredAt(k)) {
        fired = true;
        break;
      }
    }
    if (!fired) return false;
  }
  return true;
}

std::string_view GoPolicyName(GoPolicy p) {
  switch (p) {
    case GoPolicy::kNone:
      return "none";
    case GoPolicy::kOnceEarliest:
      return "once";
    case GoPolicy::kAfterEachFire:
      return "after-each-fire";
    case GoPolicy::kRandomDelay:
      return "random-delay";
  }
  return "unknown";
}

GoPolicy ParseGoPolicy(std::string_view name) {
  for (GoPolicy p : {GoPolicy::kNone, GoPolicy::kOnceEarliest,
                     GoPolicy::kAfterEachFire, GoPolicy::kRandomDelay}) {
    if (GoPolicyName(p) == name) return p;
  }
  throw ValidationError("unknown GO policy: " + std::string(name));
}

DriverResult RunSequential(const Config& config, const FailurePattern& failures,
                           const std::vector<ProcessState>& initial_states,
                           const DriverOptions& options) {
  const ProcessSet forever = failures.AliveForever(config);
  const Time last_go =
      options.last_go_time.value_or(options.length - (config.t + 1));
  const int budget = options.policy == GoPolicy::kNone ? 0
                     : options.policy == GoPolicy::kOnceEarliest
                         ? std::min(options.max_gos, 1)
                         : options.max_gos;
  std::mt19937_64 rng(options.seed);

  int sent = 0;
  std::optional<Time> last_sent;
  bool answered = true;
  auto choose = [&](Time k) -> ProcessSet {
    if (sent >= budget || !answered || k < options.stab_bound ||
        k > last_go || forever.empty()) {
      return {};
    }
    ProcessId target = forever.front();
    if (options.policy == GoPolicy::kRandomDelay) {
      if (rng() % 2 == 0) return {};
      const std::vector<ProcessId> members = forever.members();
      target = members[rng() % members.size()];
    }
    ++sent;
    last_sent = k;
    answered = false;
    return ProcessSet{target};
  };

  DriverResult out;
  const ProcessSet at_zero = choose(0);
  Simulator sim(config, failures, initial_states, at_zero, options.variant);
  for (Time k = 1; k <= options.length; ++k) {
    // Fires observed up to k-1 answer the outstanding GO.
    if (!answered && sim.trace().FiredAt(k - 1) && *last_sent < k - 1) {
      answered = true;
    }
    sim.Advance(choose(k));
  }
  out.trace = std::move(sim).TakeTrace();
  out.inputs = out.trace.inputs;
  return out;
}

SwiftnessVerdict CompareSwiftness(const Trace& a, std::optional<Time> stab_a,
                                  const Trace& b, std::optional<Time> stab_b) {
  if (!(a.config == b.config) || !(a.failures == b.failures) ||
      !(a.inputs == b.inputs)) {
    throw ValidationError(
        "swiftness comparison needs runs with identical config, failure "
        "pattern and input pattern");
  }
  SwiftnessVerdict out;
  if (!stab_a || !stab_b) return out;
  const Time end = std::min(a.length(), b.length());
  for (Time k = 0; k <= end; ++k) {
    const int ca = *FireCount(a, stab_a, k);
    const int cb = *FireCount(b, stab_b, k);
    if (ca < cb) out.deficits.push_back(k);
    if (ca > cb && !out.first_lead) out.first_lead = k;
  }
  out.decision =
      out.deficits.empty() ? Decision::kHolds : Decision::kViolated;
  return out;
}

}  // namespace firesquad
