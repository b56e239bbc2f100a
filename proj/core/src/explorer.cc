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

#include "firesquad/explorer.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace firesquad {

// ---------------------------------------------------------------------------
// Failure patterns.

namespace {

using PatternVisitor = std::function<void(const FailurePattern&)>;

void VisitBlocked(const Config& config, const std::vector<ProcessId>& procs,
                  const std::vector<int>& rounds, bool all_subsets,
                  std::size_t index, std::map<ProcessId, Crash>& crashes,
                  const PatternVisitor& visit) {
  if (index == procs.size()) {
    visit(FailurePattern(crashes));
    return;
  }
  const ProcessId p = procs[index];
  const int r = rounds[index];
  ProcessSet eligible = config.processes() - ProcessSet{p};
  for (std::size_t j = 0; j < procs.size(); ++j) {
    if (rounds[j] < r) eligible.erase(procs[j]);
  }
  const std::uint64_t mask = eligible.bits();
  auto emit = [&](std::uint64_t sub) {
    crashes[p] = Crash{r, ProcessSet(sub)};
    VisitBlocked(config, procs, rounds, all_subsets, index + 1, crashes,
                 visit);
  };
  if (all_subsets) {
    for (std::uint64_t sub = 0;; sub = (sub - mask) & mask) {
      emit(sub);
      if (sub == mask) break;
    }
  } else {
    emit(0);
    if (mask != 0) emit(mask);
  }
  crashes.erase(p);
}

void VisitRounds(const Config& config, const std::vector<ProcessId>& procs,
                 int max_round, bool all_subsets, std::vector<int>& rounds,
                 const PatternVisitor& visit) {
  if (rounds.size() == procs.size()) {
    std::map<ProcessId, Crash> crashes;
    VisitBlocked(config, procs, rounds, all_subsets, 0, crashes, visit);
    return;
  }
  for (int r = 1; r <= max_round; ++r) {
    rounds.push_back(r);
    VisitRounds(config, procs, max_round, all_subsets, rounds, visit);
    rounds.pop_back();
  }
}

void VisitCombinations(const Config& config, int size, ProcessId next,
                       std::vector<ProcessId>& chosen, int max_round,
                       bool all_subsets, const PatternVisitor& visit) {
  if (static_cast<int>(chosen.size()) == size) {
    std::vector<int> rounds;
    VisitRounds(config, chosen, max_round, all_subsets, rounds, visit);
    return;
  }
  for (ProcessId p = next; p <= config.n; ++p) {
    chosen.push_back(p);
    VisitCombinations(config, size, p + 1, chosen, max_round, all_subsets,
                      visit);
    chosen.pop_back();
  }
}

void VisitFailurePatterns(const Config& config, int max_crash_round,
                          bool all_subsets, const PatternVisitor& visit) {
  config.Validate();
  if (max_crash_round < 1) {
    visit(FailurePattern());
    return;
  }
  for (int size = 0; size <= config.t; ++size) {
    std::vector<ProcessId> chosen;
    VisitCombinations(config, size, 1, chosen, max_crash_round, all_subsets,
                      visit);
  }
}

}  // namespace

std::int64_t CountFailurePatterns(const Config& config, int max_crash_round,
                                  bool enumerate_blocked_subsets) {
  std::int64_t count = 0;
  VisitFailurePatterns(config, max_crash_round, enumerate_blocked_subsets,
                       [&](const FailurePattern&) { ++count; });
  return count;
}

std::vector<FailurePattern> EnumerateFailurePatterns(
    const Config& config, int max_crash_round, bool enumerate_blocked_subsets,
    std::int64_t budget) {
  const std::int64_t count =
      CountFailurePatterns(config, max_crash_round, enumerate_blocked_subsets);
  if (count > budget) {
    throw BudgetExceeded("failure-pattern enumeration would produce " +
                             std::to_string(count) + " patterns (budget " +
                             std::to_string(budget) + ")",
                         count);
  }
  std::vector<FailurePattern> out;
  out.reserve(count);
  VisitFailurePatterns(config, max_crash_round, enumerate_blocked_subsets,
                       [&](const FailurePattern& f) { out.push_back(f); });
  return out;
}

// ---------------------------------------------------------------------------
// Initial states.

std::int64_t PerProcessStateCount(const Config& config) {
  std::int64_t count = std::int64_t{1} << config.req_size();
  for (int i = 0; i < config.view_size(); ++i) count *= config.t + 2;
  return count << config.n;
}

ProcessState PerProcessState(const Config& config, std::int64_t index) {
  if (index < 0 || index >= PerProcessStateCount(config)) {
    throw ValidationError("state index out of range");
  }
  ProcessState s;
  s.req.resize(config.req_size());
  for (int i = 0; i < config.req_size(); ++i) {
    s.req[i] = static_cast<int>(index & 1);
    index >>= 1;
  }
  s.view.resize(config.view_size());
  for (int i = 0; i < config.view_size(); ++i) {
    s.view[i] = static_cast<int>(index % (config.t + 2));
    index /= config.t + 2;
  }
  s.fail = ProcessSet(static_cast<std::uint64_t>(index));
  return s;
}

ProcessState RandomProcessState(const Config& config, std::mt19937_64& rng) {
  ProcessState s;
  s.req.resize(config.req_size());
  for (int& r : s.req) r = static_cast<int>(rng() & 1);
  s.view.resize(config.view_size());
  for (int& v : s.view) v = static_cast<int>(rng() % (config.t + 2));
  s.fail = ProcessSet(rng() & config.processes().bits());
  return s;
}

std::vector<JointState> AdversarialCorpus(const Config& config) {
  const ProcessState canonical = CanonicalState(config);
  std::vector<ProcessState> singles;
  singles.push_back(canonical);

  ProcessState phantom = canonical;
  std::fill(phantom.req.begin(), phantom.req.end(), 1);
  singles.push_back(phantom);

  ProcessState zero_view = canonical;
  std::fill(zero_view.view.begin(), zero_view.view.end(), 0);
  singles.push_back(zero_view);

  ProcessState zero_view_phantom = phantom;
  std::fill(zero_view_phantom.view.begin(), zero_view_phantom.view.end(), 0);
  singles.push_back(zero_view_phantom);

  ProcessState fire_now = canonical;
  fire_now.req.back() = 1;
  fire_now.view[0] = 0;
  singles.push_back(fire_now);

  std::vector<JointState> out;
  for (const ProcessState& s : singles) {
    out.emplace_back(config.n, s);
  }
  // Fail sets accusing every peer of having crashed.
  JointState accusing(config.n, canonical);
  for (ProcessId p = 1; p <= config.n; ++p) {
    accusing[p - 1].fail = config.processes() - ProcessSet{p};
  }
  out.push_back(accusing);
  JointState accusing_phantom = accusing;
  for (ProcessState& s : accusing_phantom) s.req = phantom.req;
  out.push_back(accusing_phantom);
  // Mixtures: process p takes the (p + shift)-th single.
  for (std::size_t shift = 0; shift < singles.size(); ++shift) {
    JointState mix;
    for (ProcessId p = 1; p <= config.n; ++p) {
      ProcessState s = singles[(p + shift) % singles.size()];
      if (p % 2 == 0) s.fail = ProcessSet{1 + (p % config.n)};
      mix.push_back(std::move(s));
    }
    out.push_back(std::move(mix));
  }
  return out;
}

std::vector<JointState> AdversarialStates(const Config& config,
                                          const StateSampling& sampling) {
  std::vector<JointState> out;
  if (sampling.include_corpus) out = AdversarialCorpus(config);
  const std::int64_t per_process = PerProcessStateCount(config);
  if (sampling.uniform_exhaustive) {
    for (std::int64_t i = 0; i < per_process; ++i) {
      out.emplace_back(config.n, PerProcessState(config, i));
    }
  }
  if (sampling.joint_exhaustive_budget > 0) {
    std::int64_t joint = 1;
    bool fits = true;
    for (int p = 0; p < config.n && fits; ++p) {
      if (joint > sampling.joint_exhaustive_budget / per_process) {
        fits = false;
      } else {
        joint *= per_process;
      }
    }
    if (fits && joint <= sampling.joint_exhaustive_budget) {
      for (std::int64_t j = 0; j < joint; ++j) {
        JointState state;
        std::int64_t rest = j;
        for (int p = 0; p < config.n; ++p) {
          state.push_back(PerProcessState(config, rest % per_process));
          rest /= per_process;
        }
        out.push_back(std::move(state));
      }
    }
  }
  std::mt19937_64 rng(sampling.seed);
  for (int i = 0; i < sampling.random_joint; ++i) {
    JointState state;
    for (int p = 0; p < config.n; ++p) {
      state.push_back(RandomProcessState(config, rng));
    }
    out.push_back(std::move(state));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Invariant catalog.

std::string_view InputPolicyName(InputPolicy p) {
  switch (p) {
    case InputPolicy::kNone:
      return "none";
    case InputPolicy::kPhantom:
      return "phantom";
    case InputPolicy::kOneGo:
      return "one-go";
    case InputPolicy::kSequential:
      return "sequential";
  }
  return "unknown";
}

InputPolicy ParseInputPolicy(std::string_view name) {
  for (InputPolicy p : {InputPolicy::kNone, InputPolicy::kPhantom,
                        InputPolicy::kOneGo, InputPolicy::kSequential}) {
    if (InputPolicyName(p) == name) return p;
  }
  throw ValidationError("unknown input policy: " + std::string(name));
}

namespace {

enum Inv : int {
  // Run level.
  kStabWithinTPlusOne,
  kStabWithinPublication,
  kCleanRoundAgreement,
  kCleanRoundReqAgreement,
  kReportedFailuresObserved,
  kHorizonNonincreasing,
  kCheckTwoInert,
  kFailSetSandwich,
  kEqualViewFireTogether,
  kUnitHorizonView,
  kViewPrefixAgreement,
  kSimultaneityAfterCleanRound,
  kLivenessWithinTPlusOne,
  kSafetyFromPublication,
  kViewWithinHorizon,
  kPostFireEmpty,
  kHorizonRange,
  kBestHorizonWithinPublication,
  kSequentialInput,
  kFireByBestHorizon,
  kNoFireBeforePublication,
  // Pattern level.
  kDiscoveredMonotone,
  kPublicationWindowExact,
  kFirstCleanWithinPublication,
  kDelayedPatternPublication,
  kTightnessLowerBound,
  kTightnessExact,
  kCanonicalStartFs0,
  kInvariantCount,
};

constexpr std::array<std::string_view, kInvariantCount> kInvariantNames = {
    "stab-within-t+1",
    "stab-within-publication-time",
    "clean-round-agreement",
    "clean-round-req-agreement",
    "reported-failures-observed",
    "horizon-nonincreasing",
    "check-two-inert",
    "fail-set-sandwich",
    "equal-view-fire-together",
    "unit-horizon-view",
    "view-prefix-agreement",
    "simultaneity-after-clean-round",
    "liveness-within-t+1",
    "safety-from-publication-time",
    "view-within-horizon",
    "post-fire-empty",
    "horizon-range",
    "best-horizon-within-publication",
    "sequential-input",
    "fire-by-best-horizon",
    "no-fire-before-publication",
    "discovered-monotone",
    "publication-window-exact",
    "first-clean-within-publication",
    "delayed-pattern-publication",
    "tightness-lower-bound",
    "tightness-exact",
    "canonical-start-fs0",
};

// Accumulates stats in a flat array and keeps the first few counterexamples
// per invariant.
class Tally {
 public:
  explicit Tally(int cap) : cap_(cap) {}

  void Instance(Inv id) { ++stats_[id].instances; }

  // Returns true if the caller should build a counterexample.
  bool Violation(Inv id) {
    ++stats_[id].violations;
    return kept_[id]++ < cap_;
  }

  void Keep(Counterexample c) { counterexamples_.push_back(std::move(c)); }

  void Stab(std::optional<int> offset) {
    if (offset) {
      ++stab_offsets_[*offset];
    } else {
      ++undecided_stab_;
    }
  }

  void MergeInto(SweepReport& report) const {
    for (int i = 0; i < kInvariantCount; ++i) {
      InvariantStats& s = report.invariants[std::string(kInvariantNames[i])];
      s.instances += stats_[i].instances;
      s.violations += stats_[i].violations;
    }
    std::map<std::string, int> kept;
    for (const Counterexample& c : report.counterexamples) ++kept[c.invariant];
    for (const Counterexample& c : counterexamples_) {
      if (kept[c.invariant]++ < cap_) report.counterexamples.push_back(c);
    }
    for (const auto& [offset, runs] : stab_offsets_) {
      report.stab_offsets[offset] += runs;
    }
    report.undecided_stab += undecided_stab_;
  }

 private:
  int cap_;
  std::array<InvariantStats, kInvariantCount> stats_{};
  std::array<int, kInvariantCount> kept_{};
  std::vector<Counterexample> counterexamples_;
  std::map<int, std::int64_t> stab_offsets_;
  std::int64_t undecided_stab_ = 0;
};

// Everything the per-run checks need, computed once per run.
class RunChecker {
 public:
  RunChecker(const Trace& trace, const RunContext& ctx, Tally& tally)
      : trace_(trace),
        ctx_(ctx),
        facts_(*ctx.facts),
        config_(trace.config),
        t_(trace.config.t),
        length_(trace.length()),
        tally_(tally),
        verdict_(Evaluate(trace)),
        profile_(BestHorizons(trace)) {}

  void CheckAll() {
    CheckStabilization();
    CheckCleanRoundAgreement();
    CheckCleanRoundReqAgreement();
    CheckReportedFailuresObserved();
    CheckHorizonNonincreasing();
    CheckCheckTwoInert();
    CheckFailSetSandwich();
    CheckEqualViewFireTogether();
    CheckUnitHorizonView();
    CheckViewPrefixAgreement();
    CheckSimultaneityAfterCleanRound();
    CheckLiveness();
    CheckSafetyFromPublication();
    CheckViewWithinHorizon();
    CheckPostFireEmptyAndRange();
    CheckBestHorizon();
    if (ctx_.policy == InputPolicy::kSequential) CheckSequential();
  }

 private:
  const std::optional<ProcessRecord>& Rec(Time k, ProcessId p) const {
    return trace_.at(k).at(p);
  }
  ProcessSet Alive(Time k) const { return trace_.at(k).alive(); }

  void Fail(Inv id, Time k, const std::string& detail) {
    if (!tally_.Violation(id)) return;
    Counterexample c;
    c.invariant = std::string(kInvariantNames[id]);
    c.scenario.config = config_;
    c.scenario.failures = trace_.failures;
    c.scenario.inputs = trace_.inputs;
    c.scenario.initial_states = *ctx_.initial_states;
    c.scenario.length = length_;
    c.scenario.label = ctx_.label + " policy=" +
                       std::string(InputPolicyName(ctx_.policy));
    c.variant = ctx_.variant;
    c.policy = ctx_.policy;
    c.time = k;
    c.detail = detail;
    tally_.Keep(std::move(c));
  }

  void CheckStabilization() {
    tally_.Instance(kStabWithinTPlusOne);
    tally_.Instance(kStabWithinPublication);
    tally_.Stab(verdict_.stab ? std::optional<int>(*verdict_.stab -
                                                   facts_.publication_time)
                              : std::nullopt);
    if (!verdict_.stab) {
      Fail(kStabWithinTPlusOne, length_, "stabilization time undecided");
      Fail(kStabWithinPublication, length_, "stabilization time undecided");
      return;
    }
    const Time stab = *verdict_.stab;
    if (stab > t_ + 1) {
      Fail(kStabWithinTPlusOne, stab,
           "stab=" + std::to_string(stab) + " > t+1");
    }
    if (stab > facts_.publication_time) {
      Fail(kStabWithinPublication, stab,
           "stab=" + std::to_string(stab) + " > bb(F,0)=" +
               std::to_string(facts_.publication_time));
    }
  }

  void CheckCleanRoundAgreement() {
    for (Time r = 1; r <= length_; ++r) {
      if (!facts_.oracle.at(r).clean) continue;
      const std::vector<ProcessId> alive = Alive(r).members();
      if (alive.size() < 2) continue;
      tally_.Instance(kCleanRoundAgreement);
      const ProcessRecord& a = *Rec(r, alive[0]);
      for (std::size_t i = 1; i < alive.size(); ++i) {
        const ProcessRecord& b = *Rec(r, alive[i]);
        // view[t] is carried over, never rebuilt from messages, so only the
        // lower entries must agree.
        if (a.state.fail != b.state.fail ||
            a.reported_failures != b.reported_failures ||
            !std::equal(a.state.view.begin(), a.state.view.end() - 1,
                        b.state.view.begin())) {
          Fail(kCleanRoundAgreement, r,
               "processes " + std::to_string(alive[0]) + " and " +
                   std::to_string(alive[i]) +
                   " differ after clean round " + std::to_string(r));
          break;
        }
      }
    }
  }

  void CheckCleanRoundReqAgreement() {
    for (Time r = 1; r <= length_; ++r) {
      if (!facts_.oracle.at(r).clean) continue;
      for (int d = 0; d < t_ && r + d <= length_; ++d) {
        const std::vector<ProcessId> alive = Alive(r + d).members();
        if (alive.size() < 2) continue;
        tally_.Instance(kCleanRoundReqAgreement);
        const ProcessRecord& a = *Rec(r + d, alive[0]);
        bool ok = true;
        for (std::size_t j = 1; j < alive.size() && ok; ++j) {
          const ProcessRecord& b = *Rec(r + d, alive[j]);
          for (int i = d + 1; i <= t_; ++i) {
            if (a.state.req[i] != b.state.req[i]) {
              Fail(kCleanRoundReqAgreement, r + d,
                   "req[" + std::to_string(i) + "] differs between " +
                       std::to_string(alive[0]) + " and " +
                       std::to_string(alive[j]) + " after clean round " +
                       std::to_string(r));
              ok = false;
              break;
            }
          }
        }
      }
    }
  }

  void CheckReportedFailuresObserved() {
    for (Time k = 2; k <= length_; ++k) {
      for (ProcessId p : Alive(k).members()) {
        tally_.Instance(kReportedFailuresObserved);
        const ProcessRecord& rec = *Rec(k, p);
        if (!rec.reported_failures.IsSubsetOf(rec.state.fail) ||
            rec.horz != t_ + 1 - rec.reported_failures.size()) {
          Fail(kReportedFailuresObserved, k,
               "process " + std::to_string(p) + " reported " +
                   ToString(rec.reported_failures) + " observed " +
                   ToString(rec.state.fail) + " horz " +
                   std::to_string(rec.horz));
        }
      }
    }
  }

  void CheckHorizonNonincreasing() {
    const Time strong_from = std::min(2, facts_.first_clean);
    for (Time k = 1; k + 1 <= length_; ++k) {
      const ProcessSet next = Alive(k + 1);
      const ProcessSet senders = k >= strong_from ? Alive(k) : next;
      if (next.empty()) continue;
      tally_.Instance(kHorizonNonincreasing);
      int max_next = 0;
      for (ProcessId q : next.members()) {
        max_next = std::max(max_next, Rec(k + 1, q)->horz);
      }
      int min_now = std::numeric_limits<int>::max();
      for (ProcessId p : senders.members()) {
        min_now = std::min(min_now, Rec(k, p)->horz);
      }
      if (max_next > min_now) {
        Fail(kHorizonNonincreasing, k + 1,
             "horz rose from " + std::to_string(min_now) + " at " +
                 std::to_string(k) + " to " + std::to_string(max_next));
      }
    }
  }

  void CheckCheckTwoInert() {
    const std::uint64_t below_t = (std::uint64_t{1} << t_) - 1;
    for (Time k = std::min(2, facts_.first_clean) + 1; k <= length_; ++k) {
      for (ProcessId p : Alive(k).members()) {
        tally_.Instance(kCheckTwoInert);
        if ((Rec(k, p)->check_two_raised & below_t) != 0) {
          Fail(kCheckTwoInert, k,
               "monotonicity check raised a view entry below t at process " +
                   std::to_string(p));
        }
      }
    }
  }

  void CheckFailSetSandwich() {
    for (Time k = 1; k <= length_; ++k) {
      const int lo = facts_.oracle.at(k - 1).x;
      const int hi = facts_.oracle.at(k).x;
      for (ProcessId p : Alive(k).members()) {
        tally_.Instance(kFailSetSandwich);
        const int observed = Rec(k, p)->state.fail.size();
        if (observed < lo || observed > hi) {
          Fail(kFailSetSandwich, k,
               "|fail| of process " + std::to_string(p) + " is " +
                   std::to_string(observed) + ", outside [" +
                   std::to_string(lo) + "," + std::to_string(hi) + "]");
        }
        if (k + 1 > length_ || !Rec(k + 1, p)) continue;
        tally_.Instance(kFailSetSandwich);
        const int reported = Rec(k + 1, p)->reported_failures.size();
        if (reported < lo || reported > hi) {
          Fail(kFailSetSandwich, k + 1,
               "|reported| of process " + std::to_string(p) + " is " +
                   std::to_string(reported) + ", outside [" +
                   std::to_string(lo) + "," + std::to_string(hi) + "]");
        }
      }
    }
  }

  void CheckEqualViewFireTogether() {
    for (Time k = facts_.first_clean; k <= length_; ++k) {
      const std::vector<ProcessId> alive = Alive(k).members();
      for (std::size_t i = 0; i < alive.size(); ++i) {
        for (std::size_t j = i + 1; j < alive.size(); ++j) {
          const ProcessRecord& a = *Rec(k, alive[i]);
          const ProcessRecord& b = *Rec(k, alive[j]);
          if (a.state.view[0] != b.state.view[0]) continue;
          tally_.Instance(kEqualViewFireTogether);
          if (a.fired != b.fired) {
            Fail(kEqualViewFireTogether, k,
                 "processes " + std::to_string(alive[i]) + " and " +
                     std::to_string(alive[j]) +
                     " share view[0] but fire differently");
          }
        }
      }
    }
  }

  void CheckUnitHorizonView() {
    for (Time k = std::max(1, std::min(2, facts_.first_clean)); k <= length_;
         ++k) {
      if (profile_.min_h[k] != 1) continue;
      tally_.Instance(kUnitHorizonView);
      for (ProcessId p : Alive(k).members()) {
        if (Rec(k, p)->state.view[0] != 1) {
          Fail(kUnitHorizonView, k,
               "minH=1 but view[0]=" +
                   std::to_string(Rec(k, p)->state.view[0]) +
                   " at process " + std::to_string(p));
          break;
        }
      }
    }
  }

  void CheckViewPrefixAgreement() {
    for (Time r = std::max(1, facts_.first_clean); r <= length_; ++r) {
      if (!profile_.min_h[r] || *profile_.min_h[r] <= 1) continue;
      const int prefix = *profile_.min_h[r] - 1;
      const std::vector<ProcessId> alive = Alive(r).members();
      if (alive.size() < 2) continue;
      tally_.Instance(kViewPrefixAgreement);
      const ProcessRecord& a = *Rec(r, alive[0]);
      for (std::size_t j = 1; j < alive.size(); ++j) {
        const ProcessRecord& b = *Rec(r, alive[j]);
        if (!std::equal(a.state.view.begin(), a.state.view.begin() + prefix,
                        b.state.view.begin())) {
          Fail(kViewPrefixAgreement, r,
               "view prefix of length " + std::to_string(prefix) +
                   " differs between " + std::to_string(alive[0]) + " and " +
                   std::to_string(alive[j]));
          break;
        }
      }
    }
  }

  void CheckSimultaneityAfterCleanRound() {
    const ProcessSet forever = trace_.failures.AliveForever(config_);
    for (Time k = facts_.first_clean; k <= length_; ++k) {
      const ProcessSet fires = trace_.at(k).fires();
      if (fires.empty()) continue;
      tally_.Instance(kSimultaneityAfterCleanRound);
      if (!forever.IsSubsetOf(fires)) {
        Fail(kSimultaneityAfterCleanRound, k,
             "fired " + ToString(fires) + ", never-faulty " +
                 ToString(forever));
      }
    }
  }

  void CheckLiveness() {
    const ProcessSet forever = trace_.failures.AliveForever(config_);
    for (const auto& [g, targets] : trace_.inputs.entries()) {
      if (g + t_ + 1 > length_) continue;
      for (ProcessId p : (targets & forever).members()) {
        tally_.Instance(kLivenessWithinTPlusOne);
        bool fired = false;
        for (Time k = g + 1; k <= g + t_ + 1 && !fired; ++k) {
          fired = Rec(k, p)->fired;
        }
        if (!fired) {
          Fail(kLivenessWithinTPlusOne, g,
               "GO at process " + std::to_string(p) +
                   " unanswered within t+1 rounds");
        }
      }
    }
  }

  void CheckSafetyFromPublication() {
    const Time from = facts_.publication_time;
    if (from > length_) return;
    bool late_fire = false;
    for (Time k = from; k <= length_; ++k) late_fire |= trace_.FiredAt(k);
    if (!late_fire) return;
    tally_.Instance(kSafetyFromPublication);
    int fires = 0;
    int gos = 0;
    for (Time k = 0; k < from; ++k) gos += trace_.inputs.AnyGoAt(k) ? 1 : 0;
    for (Time k = from; k <= length_; ++k) {
      if (trace_.FiredAt(k)) ++fires;
      if (fires > gos) {
        Fail(kSafetyFromPublication, k,
             std::to_string(fires) + " fire time(s) since bb(F,0)=" +
                 std::to_string(from) + " but " + std::to_string(gos) +
                 " GO time(s) before " + std::to_string(k));
        break;
      }
      gos += trace_.inputs.AnyGoAt(k) ? 1 : 0;
    }
  }

  void CheckViewWithinHorizon() {
    for (Time k = 1; k <= length_; ++k) {
      for (ProcessId p : Alive(k).members()) {
        const int horz = Rec(k, p)->horz;
        const Time later = k + horz - 1;
        if (later > length_ || !Rec(later, p)) continue;
        tally_.Instance(kViewWithinHorizon);
        if (Rec(later, p)->state.view[0] > horz) {
          Fail(kViewWithinHorizon, later,
               "view[0]=" + std::to_string(Rec(later, p)->state.view[0]) +
                   " exceeds horz=" + std::to_string(horz) + " from time " +
                   std::to_string(k) + " at process " + std::to_string(p));
        }
      }
    }
  }

  void CheckPostFireEmptyAndRange() {
    for (Time k = 1; k <= length_; ++k) {
      for (ProcessId p : Alive(k).members()) {
        const ProcessRecord& rec = *Rec(k, p);
        tally_.Instance(kHorizonRange);
        if (rec.horz < 1 || rec.horz > t_ + 1) {
          Fail(kHorizonRange, k,
               "horz=" + std::to_string(rec.horz) + " at process " +
                   std::to_string(p));
        }
        if (!rec.fired) continue;
        tally_.Instance(kPostFireEmpty);
        for (int j = rec.state.view[0]; j <= t_ + 1; ++j) {
          if (rec.state.req[j] != 0) {
            Fail(kPostFireEmpty, k,
                 "req[" + std::to_string(j) + "] still set after firing");
            break;
          }
        }
      }
    }
  }

  void CheckBestHorizon() {
    for (Time k = 0; k <= length_; ++k) {
      const auto best = profile_.BestH(k);
      if (!best) continue;
      tally_.Instance(kBestHorizonWithinPublication);
      if (*best > facts_.oracle.at(k).bb) {
        Fail(kBestHorizonWithinPublication, k,
             "bestH=" + std::to_string(*best) + " > bb=" +
                 std::to_string(facts_.oracle.at(k).bb));
      }
    }
  }

  void CheckSequential() {
    tally_.Instance(kSequentialInput);
    const auto sequential = IsSequential(trace_, verdict_.stab);
    if (sequential != true) {
      Fail(kSequentialInput, 0,
           sequential ? "driver produced a non-sequential input"
                      : "sequentiality undecided");
    }
    for (Time g : trace_.inputs.GoTimes()) {
      for (ProcessId p : trace_.inputs.GoAt(g).members()) {
        const auto best = profile_.BestH(g);
        if (best) {
          tally_.Instance(kFireByBestHorizon);
          bool fired = false;
          for (Time k = g + 1; k <= std::min(*best, length_) && !fired; ++k) {
            fired = Rec(k, p)->fired;
          }
          if (!fired) {
            Fail(kFireByBestHorizon, g,
                 "GO at process " + std::to_string(p) +
                     " not answered by bestH=" + std::to_string(*best));
          }
        }
        const Time publication = facts_.oracle.at(g).bb;
        tally_.Instance(kNoFireBeforePublication);
        for (Time k = g + 1; k < publication && k <= length_; ++k) {
          if (trace_.FiredAt(k)) {
            Fail(kNoFireBeforePublication, k,
                 "fired at " + std::to_string(k) + " after GO at " +
                     std::to_string(g) + " but bb(F," + std::to_string(g) +
                     ")=" + std::to_string(publication));
            break;
          }
        }
      }
    }
  }

  const Trace& trace_;
  const RunContext& ctx_;
  const PatternFacts& facts_;
  const Config& config_;
  const int t_;
  const int length_;
  Tally& tally_;
  const FsVerdict verdict_;
  const HorizonProfile profile_;
};

void CheckPatternInvariantsImpl(const PatternFacts& facts, int run_length,
                                bool build_witness, Variant variant,
                                Tally& tally, SweepReport* witnesses) {
  const Config& config = facts.config;
  const int t = config.t;
  auto keep = [&](Inv id, Time k, const std::string& detail,
                  const JointState& states, const InputPattern& inputs) {
    if (!tally.Violation(id)) return;
    Counterexample c;
    c.invariant = std::string(kInvariantNames[id]);
    c.scenario.config = config;
    c.scenario.failures = facts.failures;
    c.scenario.inputs = inputs;
    c.scenario.initial_states = states;
    c.scenario.length = run_length;
    c.scenario.label = "pattern-level";
    c.variant = variant;
    c.pattern_level = true;
    c.time = k;
    c.detail = detail;
    tally.Keep(std::move(c));
  };
  const JointState canonical(config.n, CanonicalState(config));

  tally.Instance(kDiscoveredMonotone);
  const OracleTable& table = facts.oracle;
  for (Time k = 0; k <= table.horizon(); ++k) {
    const int x = table.at(k).x;
    const bool bad = (k == 0 && x != 0) || x > t ||
                     (k > 0 && x < table.at(k - 1).x);
    if (bad) {
      keep(kDiscoveredMonotone, k, "x=" + std::to_string(x), canonical, {});
      break;
    }
  }

  tally.Instance(kPublicationWindowExact);
  {
    const int wide = table.horizon() + 3 * (t + 1);
    const std::vector<int> x = DiscoveredCounts(facts.failures, config, wide);
    for (Time k = 0; k <= table.horizon(); ++k) {
      int best = std::numeric_limits<int>::max();
      for (Time j = k; j <= wide; ++j) best = std::min(best, j + t + 1 - x[j]);
      if (best != table.at(k).bb) {
        keep(kPublicationWindowExact, k,
             "windowed bb=" + std::to_string(table.at(k).bb) +
                 " wide bb=" + std::to_string(best),
             canonical, {});
        break;
      }
    }
  }

  tally.Instance(kFirstCleanWithinPublication);
  if (facts.first_clean < 1 || facts.first_clean > t + 1 ||
      facts.first_clean > facts.publication_time) {
    keep(kFirstCleanWithinPublication, facts.first_clean,
         "r_c=" + std::to_string(facts.first_clean) +
             " bb(F,0)=" + std::to_string(facts.publication_time),
         canonical, {});
  }

  tally.Instance(kDelayedPatternPublication);
  {
    const int delayed =
        PublicationTime(facts.failures.Delayed(1), config, 0);
    if (delayed < facts.publication_time) {
      keep(kDelayedPatternPublication, 0,
           "bb(F',0)=" + std::to_string(delayed) + " < bb(F,0)=" +
               std::to_string(facts.publication_time),
           canonical, {});
    }
  }

  // Canonical start with no input and with a single GO at time 0.
  {
    const ProcessSet forever = facts.failures.AliveForever(config);
    for (int with_go = 0; with_go <= 1; ++with_go) {
      Scenario s;
      s.config = config;
      s.failures = facts.failures;
      s.initial_states = canonical;
      s.length = run_length;
      if (with_go) s.inputs.AddGo(0, forever.front());
      const Trace trace = Run(s, variant);
      tally.Instance(kCanonicalStartFs0);
      const FsCheck check = CheckFs(trace, 0);
      if (check.decision != Decision::kHolds) {
        keep(kCanonicalStartFs0,
             check.violations.empty() ? 0 : check.violations.front().time,
             "FS(0) " + std::string(DecisionName(check.decision)) +
                 (check.violations.empty()
                      ? std::string()
                      : ": " + check.violations.front().detail),
             canonical, s.inputs);
      }
    }
  }

  if (!build_witness) return;
  TightnessWitness w =
      BuildTightnessWitness(config, facts.failures, run_length, variant);
  tally.Instance(kTightnessLowerBound);
  tally.Instance(kTightnessExact);
  const std::string detail =
      "witness stab=" + (w.stab ? std::to_string(*w.stab) : "undecided") +
      " first fire=" +
      (w.first_fire ? std::to_string(*w.first_fire) : "none") +
      " bb(F,0)=" + std::to_string(w.publication_time);
  if (!w.stab || *w.stab < w.publication_time) {
    keep(kTightnessLowerBound, w.stab.value_or(run_length), detail, w.states,
         {});
  }
  if (!w.stab || *w.stab != w.publication_time) {
    keep(kTightnessExact, w.stab.value_or(run_length), detail, w.states, {});
  }
  if (witnesses) witnesses->witnesses.push_back(std::move(w));
}

}  // namespace

const std::vector<std::string>& InvariantCatalog() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (std::string_view n : kInvariantNames) out.emplace_back(n);
    return out;
  }();
  return names;
}

PatternFacts PatternFacts::Compute(const Config& config,
                                   const FailurePattern& failures,
                                   int run_length) {
  PatternFacts f;
  f.config = config;
  f.failures = failures;
  f.oracle = ComputeOracle(failures, config,
                           std::max(run_length, config.t + 1));
  f.publication_time = f.oracle.at(0).bb;
  f.first_clean = f.oracle.first_clean;
  return f;
}

void CheckRunInvariants(const Trace& trace, const RunContext& context,
                        SweepReport& report, int counterexample_cap) {
  Tally tally(counterexample_cap);
  RunChecker(trace, context, tally).CheckAll();
  tally.MergeInto(report);
}

void CheckPatternInvariants(const PatternFacts& facts, int run_length,
                            bool build_witness, Variant variant,
                            SweepReport& report, int counterexample_cap) {
  Tally tally(counterexample_cap);
  CheckPatternInvariantsImpl(facts, run_length, build_witness, variant, tally,
                             &report);
  tally.MergeInto(report);
}

TightnessWitness BuildTightnessWitness(const Config& config,
                                       const FailurePattern& failures,
                                       int run_length, Variant variant) {
  TightnessWitness w;
  w.failures = failures;
  w.publication_time = PublicationTime(failures, config, 0);
  const ProcessSet forever = failures.AliveForever(config);
  const JointState canonical(config.n, CanonicalState(config));
  Simulator prefix(config, failures.Delayed(1), canonical,
                   ProcessSet{forever.front()}, variant);
  prefix.Advance({});
  for (ProcessId p = 1; p <= config.n; ++p) {
    w.states.push_back(prefix.trace().at(1).at(p)->state);
  }
  Scenario s;
  s.config = config;
  s.failures = failures;
  s.initial_states = w.states;
  s.length = run_length;
  s.label = "tightness";
  const Trace trace = Run(s, variant);
  w.stab = StabilizationTime(trace);
  const FsVerdict v = Evaluate(trace);
  if (!v.fire_times.empty()) w.first_fire = v.fire_times.front();
  return w;
}

void SweepSpec::Validate() const {
  config.Validate();
  if (max_crash_round < 0) {
    throw ValidationError("max_crash_round must be non-negative");
  }
  if (run_length < 2 * (config.t + 1)) {
    throw ValidationError("run_length must be at least 2(t+1)");
  }
  if (jobs < 1) throw ValidationError("jobs must be positive");
  if (input_policies.empty()) {
    throw ValidationError("at least one input policy is required");
  }
}

std::int64_t SweepReport::total_violations() const {
  std::int64_t total = 0;
  for (const auto& [name, s] : invariants) total += s.violations;
  return total;
}

const InvariantStats& SweepReport::stats(const std::string& name) const {
  static const InvariantStats kEmpty;
  auto it = invariants.find(name);
  return it == invariants.end() ? kEmpty : it->second;
}

namespace {

// Runs every (state, policy) pair for one failure pattern.
void SweepPattern(const SweepSpec& spec, const FailurePattern& failures,
                  std::int64_t pattern_index, Tally& tally,
                  SweepReport& partial) {
  const Config& config = spec.config;
  const int t = config.t;
  const int length = spec.run_length;
  const PatternFacts facts = PatternFacts::Compute(config, failures, length);
  CheckPatternInvariantsImpl(facts, length, spec.tightness_witnesses,
                             spec.variant, tally, &partial);

  StateSampling sampling = spec.states;
  sampling.seed = spec.states.seed ^
                  (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(
                                               pattern_index + 1));
  const std::vector<JointState> states = AdversarialStates(config, sampling);
  const int go_span = std::max(1, length - (t + 1) + 1);

  for (std::size_t j = 0; j < states.size(); ++j) {
    for (InputPolicy policy : spec.input_policies) {
      RunContext ctx;
      ctx.facts = &facts;
      ctx.policy = policy;
      ctx.variant = spec.variant;
      ctx.label = "pattern#" + std::to_string(pattern_index) + " state#" +
                  std::to_string(j);
      Trace trace;
      JointState initial = states[j];
      switch (policy) {
        case InputPolicy::kNone:
        case InputPolicy::kPhantom: {
          if (policy == InputPolicy::kPhantom) {
            for (ProcessState& s : initial) {
              std::fill(s.req.begin() + 1, s.req.end(), 1);
            }
          }
          Simulator sim(config, failures, initial, {}, spec.variant);
          for (Time k = 1; k <= length; ++k) sim.Advance({});
          trace = std::move(sim).TakeTrace();
          break;
        }
        case InputPolicy::kOneGo: {
          const Time g = static_cast<Time>(j % go_span);
          const ProcessId target =
              1 + static_cast<ProcessId>((j / go_span) % config.n);
          Scenario s;
          s.config = config;
          s.failures = failures;
          s.initial_states = initial;
          s.length = length;
          s.inputs.AddGo(g, target);
          trace = Run(s, spec.variant);
          break;
        }
        case InputPolicy::kSequential: {
          DriverOptions opts;
          opts.policy =
              j % 2 == 0 ? GoPolicy::kAfterEachFire : GoPolicy::kRandomDelay;
          opts.max_gos = length;
          opts.stab_bound = t + 1;
          opts.length = length;
          opts.seed = spec.states.seed ^ (static_cast<std::uint64_t>(
                                              pattern_index) << 32) ^ j;
          opts.variant = spec.variant;
          trace = RunSequential(config, failures, initial, opts).trace;
          break;
        }
      }
      ctx.initial_states = &initial;
      RunChecker(trace, ctx, tally).CheckAll();
      ++partial.scenarios_run;
    }
  }
}

}  // namespace

SweepReport Sweep(const SweepSpec& spec) {
  spec.Validate();
  std::vector<FailurePattern> patterns = EnumerateFailurePatterns(
      spec.config, spec.max_crash_round, spec.enumerate_blocked_subsets);
  if (spec.pattern_limit &&
      *spec.pattern_limit < static_cast<std::int64_t>(patterns.size())) {
    std::vector<FailurePattern> picked;
    const std::int64_t total = static_cast<std::int64_t>(patterns.size());
    for (std::int64_t i = 0; i < *spec.pattern_limit; ++i) {
      picked.push_back(patterns[i * total / *spec.pattern_limit]);
    }
    patterns = std::move(picked);
  }

  const std::size_t count = patterns.size();
  std::vector<SweepReport> partials(count);
  std::vector<Tally> tallies(count, Tally(spec.counterexamples_per_invariant));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      SweepPattern(spec, patterns[i], static_cast<std::int64_t>(i),
                   tallies[i], partials[i]);
    }
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, count));
  std::vector<std::thread> threads;
  for (int j = 1; j < jobs; ++j) threads.emplace_back(worker);
  worker();
  for (std::thread& th : threads) th.join();

  SweepReport report;
  report.config = spec.config;
  report.variant = spec.variant;
  report.patterns = static_cast<std::int64_t>(count);
  for (const std::string& name : InvariantCatalog()) report.invariants[name];
  for (std::size_t i = 0; i < count; ++i) {
    report.scenarios_run += partials[i].scenarios_run;
    tallies[i].MergeInto(report);
    for (TightnessWitness& w : partials[i].witnesses) {
      report.witnesses.push_back(std::move(w));
    }
  }
  for (const Counterexample& c : report.counterexamples) {
    if (Replays(c)) ++report.replayed;
  }
  return report;
}

bool Replays(const Counterexample& c) {
  const Scenario& s = c.scenario;
  const PatternFacts facts =
      PatternFacts::Compute(s.config, s.failures, s.length);
  SweepReport again;
  if (c.pattern_level) {
    Tally tally(std::numeric_limits<int>::max());
    CheckPatternInvariantsImpl(facts, s.length, true, c.variant, tally,
                               nullptr);
    tally.MergeInto(again);
  } else {
    const Trace trace = Run(s, c.variant);
    RunContext ctx;
    ctx.facts = &facts;
    ctx.variant = c.variant;
    ctx.initial_states = &s.initial_states;
    ctx.policy = c.policy;
    CheckRunInvariants(trace, ctx, again, std::numeric_limits<int>::max());
  }
  for (const Counterexample& d : again.counterexamples) {
    if (d.invariant == c.invariant && d.time == c.time &&
        d.detail == c.detail) {
      return true;
    }
  }
  return false;
}

}  // namespace firesquad
