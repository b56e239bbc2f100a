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

#include "firesquad/types.h"

#include <algorithm>
#include <sstream>

namespace firesquad {

std::vector<ProcessId> ProcessSet::members() const {
  std::vector<ProcessId> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(std::countr_zero(b) + 1);
  }
  return out;
}

std::string ToString(ProcessSet s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (ProcessId p : s.members()) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << '}';
  return os.str();
}

void Config::Validate() const {
  if (n < 2) {
    throw ValidationError("n must be at least 2 (got " + std::to_string(n) +
                          ")");
  }
  if (n > kMaxProcesses) {
    throw ValidationError("n must be at most " +
                          std::to_string(kMaxProcesses));
  }
  if (t < 0) throw ValidationError("t must be non-negative");
  if (t >= n - 1) {
    throw ValidationError("the crash bound must satisfy t < n - 1 (got n=" +
                          std::to_string(n) + ", t=" + std::to_string(t) +
                          ")");
  }
}

ProcessState CanonicalState(const Config& config) {
  ProcessState s;
  s.req.assign(config.req_size(), 0);
  s.view.assign(config.view_size(), config.t + 1);
  return s;
}

ProcessState Sanitize(ProcessState raw, const Config& config) {
  if (static_cast<int>(raw.req.size()) != config.req_size() ||
      static_cast<int>(raw.view.size()) != config.view_size()) {
    throw ValidationError(
        "state layout mismatch: expected req of length " +
        std::to_string(config.req_size()) + " and view of length " +
        std::to_string(config.view_size()));
  }
  for (int& r : raw.req) r = r != 0 ? 1 : 0;
  for (int& v : raw.view) v = std::clamp(v, 0, config.t + 1);
  raw.fail = raw.fail & config.processes();
  return raw;
}

bool IsSanitized(const ProcessState& state, const Config& config) {
  if (static_cast<int>(state.req.size()) != config.req_size() ||
      static_cast<int>(state.view.size()) != config.view_size()) {
    return false;
  }
  return std::all_of(state.req.begin(), state.req.end(),
                     [](int r) { return r == 0 || r == 1; }) &&
         std::all_of(state.view.begin(), state.view.end(),
                     [&](int v) { return v >= 0 && v <= config.t + 1; }) &&
         state.fail.IsSubsetOf(config.processes());
}

void FailurePattern::AddCrash(ProcessId p, int round, ProcessSet blocked) {
  if (crashes_.contains(p)) {
    throw ValidationError("process " + std::to_string(p) +
                          " already has a crash entry");
  }
  crashes_[p] = Crash{round, blocked};
}

std::optional<int> FailurePattern::crash_round(ProcessId p) const {
  auto it = crashes_.find(p);
  if (it == crashes_.end()) return std::nullopt;
  return it->second.round;
}

bool FailurePattern::AliveAt(ProcessId p, Time k) const {
  auto it = crashes_.find(p);
  return it == crashes_.end() || it->second.round > k;
}

ProcessSet FailurePattern::Surviving(const Config& config, Time k) const {
  ProcessSet out = config.processes();
  for (const auto& [p, crash] : crashes_) {
    if (crash.round <= k) out.erase(p);
  }
  return out;
}

ProcessSet FailurePattern::AliveForever(const Config& config) const {
  ProcessSet out = config.processes();
  for (const auto& [p, crash] : crashes_) out.erase(p);
  return out;
}

bool FailurePattern::Delivers(ProcessId sender, ProcessId receiver,
                              int round) const {
  auto it = crashes_.find(sender);
  if (it == crashes_.end()) return true;
  const Crash& crash = it->second;
  if (crash.round < round) return false;
  if (crash.round == round) return !crash.blocked.contains(receiver);
  return true;
}

FailurePattern FailurePattern::Shifted(int k) const {
  std::map<ProcessId, Crash> out;
  for (const auto& [p, crash] : crashes_) {
    Crash c = crash;
    c.round = std::max(0, crash.round - k);
    // A process down before time 0 sends nothing; its blocked set is moot.
    if (c.round == 0) c.blocked = {};
    out.emplace(p, c);
  }
  return FailurePattern(std::move(out));
}

FailurePattern FailurePattern::Delayed(int rounds) const {
  std::map<ProcessId, Crash> out;
  for (const auto& [p, crash] : crashes_) {
    Crash c = crash;
    c.round = crash.round + rounds;
    out.emplace(p, c);
  }
  return FailurePattern(std::move(out));
}

void FailurePattern::Validate(const Config& config) const {
  if (crash_count() > config.t) {
    throw ValidationError("failure pattern has " +
                          std::to_string(crash_count()) +
                          " crashes but t=" + std::to_string(config.t));
  }
  for (const auto& [p, crash] : crashes_) {
    if (p < 1 || p > config.n) {
      throw ValidationError("crashing process " + std::to_string(p) +
                            " is not in 1.." + std::to_string(config.n));
    }
    if (crash.round < 0) {
      throw ValidationError("crash round of process " + std::to_string(p) +
                            " is negative");
    }
    if (!crash.blocked.IsSubsetOf(config.processes() - ProcessSet{p})) {
      throw ValidationError("blocked set of process " + std::to_string(p) +
                            " must be a subset of the other processes");
    }
  }
}

void InputPattern::AddGo(Time k, ProcessId p) {
  if (k < 0) throw ValidationError("input time must be non-negative");
  go_[k].insert(p);
}

bool InputPattern::Go(Time k, ProcessId p) const {
  auto it = go_.find(k);
  return it != go_.end() && it->second.contains(p);
}

ProcessSet InputPattern::GoAt(Time k) const {
  auto it = go_.find(k);
  return it == go_.end() ? ProcessSet{} : it->second;
}

std::vector<Time> InputPattern::GoTimes() const {
  std::vector<Time> out;
  for (const auto& [k, set] : go_) {
    if (!set.empty()) out.push_back(k);
  }
  return out;
}

std::optional<Time> InputPattern::LastGoTime() const {
  for (auto it = go_.rbegin(); it != go_.rend(); ++it) {
    if (!it->second.empty()) return it->first;
  }
  return std::nullopt;
}

InputPattern InputPattern::Shifted(int k) const {
  InputPattern out;
  for (const auto& [time, set] : go_) {
    if (time >= k && !set.empty()) out.go_[time - k] = set;
  }
  return out;
}

}  // namespace firesquad
