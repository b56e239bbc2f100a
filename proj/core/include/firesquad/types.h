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

#ifndef FIRESQUAD_TYPES_H_
#define FIRESQUAD_TYPES_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace firesquad {

// Processes are numbered 1..n. Time k is the instant between round k and
// round k+1; round r runs from time r-1 to time r.
using ProcessId = int;
using Time = int;

inline constexpr int kMaxProcesses = 63;

// Thrown for malformed or inconsistent inputs (bad config, bad pattern,
// wrong state layout). Callers at the CLI boundary map it to a usage error.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A set of process ids, stored as a bitmask (bit p-1 <=> p).
class ProcessSet {
 public:
  constexpr ProcessSet() = default;
  constexpr explicit ProcessSet(std::uint64_t bits) : bits_(bits) {}
  ProcessSet(std::initializer_list<ProcessId> ids) {
    for (ProcessId p : ids) insert(p);
  }

  // {1, ..., n}.
  static constexpr ProcessSet All(int n) {
    return ProcessSet(n >= 64 ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << n) - 1);
  }

  constexpr bool contains(ProcessId p) const {
    return p >= 1 && p <= 64 && ((bits_ >> (p - 1)) & 1u) != 0;
  }
  void insert(ProcessId p) {
    if (p < 1 || p > kMaxProcesses) {
      throw ValidationError("process id out of range: " + std::to_string(p));
    }
    bits_ |= std::uint64_t{1} << (p - 1);
  }
  constexpr void erase(ProcessId p) {
    if (p >= 1 && p <= 64) bits_ &= ~(std::uint64_t{1} << (p - 1));
  }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr bool IsSubsetOf(ProcessSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  // Ascending list of members.
  std::vector<ProcessId> members() const;
  // Smallest member; the set must be non-empty.
  ProcessId front() const { return std::countr_zero(bits_) + 1; }

  friend constexpr ProcessSet operator|(ProcessSet a, ProcessSet b) {
    return ProcessSet(a.bits_ | b.bits_);
  }
  friend constexpr ProcessSet operator&(ProcessSet a, ProcessSet b) {
    return ProcessSet(a.bits_ & b.bits_);
  }
  // Set difference.
  friend constexpr ProcessSet operator-(ProcessSet a, ProcessSet b) {
    return ProcessSet(a.bits_ & ~b.bits_);
  }
  ProcessSet& operator|=(ProcessSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr auto operator<=>(ProcessSet, ProcessSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

std::string ToString(ProcessSet s);

// System parameters: n processes, at most t of which may crash.
struct Config {
  int n = 0;
  int t = 0;

  // Throws ValidationError unless n >= 2 and 0 <= t < n - 1.
  void Validate() const;
  ProcessSet processes() const { return ProcessSet::All(n); }
  int req_size() const { return t + 2; }
  int view_size() const { return t + 1; }

  friend bool operator==(const Config&, const Config&) = default;
};

// The persistent protocol variables of one process. `req[i]` records an
// unfulfilled GO believed to be i rounds old, `fail` holds the processes not
// heard from in the latest round, and `view[i]` is the age of the data that
// will be common knowledge i rounds from now. Entries are plain ints so that
// arbitrary (corrupted) contents can be represented before Sanitize().
struct ProcessState {
  std::vector<int> req;
  ProcessSet fail;
  std::vector<int> view;

  friend bool operator==(const ProcessState&, const ProcessState&) = default;
};

// A message is the sender's verbatim (req, fail, view) triple.
using Message = ProcessState;

// req = 0, fail = {}, view = t+1 everywhere.
ProcessState CanonicalState(const Config& config);

// Coerces every req entry into {0,1} (nonzero -> 1), clamps view entries into
// [0, t+1] and intersects fail with {1..n}. Throws ValidationError if the
// array lengths do not match t.
ProcessState Sanitize(ProcessState raw, const Config& config);

// True iff Sanitize() would return `state` unchanged.
bool IsSanitized(const ProcessState& state, const Config& config);

struct Crash {
  // Round in which the process crashes. It sends its round-`round` messages
  // to everyone except `blocked`, and nothing afterwards. Round 0 denotes a
  // process that was already down at time 0 (produced by shifting a pattern).
  int round = 1;
  ProcessSet blocked;

  friend bool operator==(const Crash&, const Crash&) = default;
};

class FailurePattern {
 public:
  FailurePattern() = default;
  explicit FailurePattern(std::map<ProcessId, Crash> crashes)
      : crashes_(std::move(crashes)) {}

  void AddCrash(ProcessId p, int round, ProcessSet blocked = {});

  const std::map<ProcessId, Crash>& crashes() const { return crashes_; }
  int crash_count() const { return static_cast<int>(crashes_.size()); }
  std::optional<int> crash_round(ProcessId p) const;

  // Whether p has not crashed by time k (p is in G^k).
  bool AliveAt(ProcessId p, Time k) const;
  // G^k.
  ProcessSet Surviving(const Config& config, Time k) const;
  // G: processes that never crash.
  ProcessSet AliveForever(const Config& config) const;
  // F^k = P \ G^k.
  ProcessSet Crashed(const Config& config, Time k) const {
    return config.processes() - Surviving(config, k);
  }

  // Whether the round-`round` message from `sender` reaches `receiver`. This
  // is the single delivery rule shared by the simulator and the oracle.
  bool Delivers(ProcessId sender, ProcessId receiver, int round) const;

  // F(k->): the same crashes with round numbers reduced by k (floored at 0).
  FailurePattern Shifted(int k) const;
  // The pattern that has a failure-free first round and then behaves as this
  // one: every crash round increased by `rounds`.
  FailurePattern Delayed(int rounds) const;

  // Throws ValidationError if the pattern is inconsistent with `config`.
  void Validate(const Config& config) const;

  friend bool operator==(const FailurePattern&,
                         const FailurePattern&) = default;

 private:
  std::map<ProcessId, Crash> crashes_;
};

// GO inputs: the set of processes receiving GO at each time. Absent entries
// mean no input.
class InputPattern {
 public:
  void AddGo(Time k, ProcessId p);
  bool Go(Time k, ProcessId p) const;
  ProcessSet GoAt(Time k) const;
  bool AnyGoAt(Time k) const { return !GoAt(k).empty(); }
  // Ascending times with at least one GO.
  std::vector<Time> GoTimes() const;
  std::optional<Time> LastGoTime() const;
  bool empty() const { return go_.empty(); }
  const std::map<Time, ProcessSet>& entries() const { return go_; }

  // I(k->): I(k->)^j = I^{j+k}.
  InputPattern Shifted(int k) const;

  friend bool operator==(const InputPattern&, const InputPattern&) = default;

 private:
  std::map<Time, ProcessSet> go_;
};

}  // namespace firesquad

#endif  // FIRESQUAD_TYPES_H_
