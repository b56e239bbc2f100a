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

#include "firesquad/oracle.h"

#include <algorithm>
#include <limits>

#include "firesquad/engine.h"

namespace firesquad {

namespace {

// Union of the survivors' knowledge at each time in [0, horizon].
std::vector<ProcessSet> DiscoveryHistory(const FailurePattern& failures,
                                         const Config& config, Time horizon) {
  std::vector<ProcessSet> known(config.n);
  std::vector<ProcessSet> history;
  history.reserve(horizon + 1);
  history.emplace_back();
  for (int round = 1; round <= horizon; ++round) {
    std::vector<ProcessSet> next(config.n);
    for (ProcessId p = 1; p <= config.n; ++p) {
      if (!failures.AliveAt(p, round)) continue;
      ProcessSet acc = known[p - 1];
      for (ProcessId q = 1; q <= config.n; ++q) {
        if (failures.AliveAt(q, round - 1) &&
            failures.Delivers(q, p, round)) {
          acc |= known[q - 1];
        } else {
          acc.insert(q);
        }
      }
      next[p - 1] = acc;
    }
    known = std::move(next);
    ProcessSet all;
    for (const ProcessSet& k : known) all |= k;
    history.push_back(all);
  }
  return history;
}

}  // namespace

std::vector<int> DiscoveredCounts(const FailurePattern& failures,
                                  const Config& config, Time horizon) {
  std::vector<int> counts;
  for (ProcessSet s : DiscoveryHistory(failures, config, horizon)) {
    counts.push_back(s.size());
  }
  return counts;
}

ProcessSet DiscoveredFailures(const FailurePattern& failures,
                              const Config& config, Time k) {
  return DiscoveryHistory(failures, config, k).back();
}

bool FailsSilently(const FailurePattern& failures, const Config& config,
                   ProcessId p) {
  auto round = failures.crash_round(p);
  if (!round) return false;
  const Crash& crash = failures.crashes().at(p);
  return (crash.blocked & failures.Surviving(config, *round)).empty();
}

bool IsCleanRound(const FailurePattern& failures, const Config& config,
                  int round) {
  for (const auto& [p, crash] : failures.crashes()) {
    if (round >= 2 && crash.round == round - 1 &&
        FailsSilently(failures, config, p)) {
      return false;
    }
    if (crash.round == round && !FailsSilently(failures, config, p)) {
      return false;
    }
  }
  return true;
}

int FirstCleanRound(const FailurePattern& failures, const Config& config) {
  for (int r = 1;; ++r) {
    if (IsCleanRound(failures, config, r)) return r;
  }
}

OracleTable ComputeOracle(const FailurePattern& failures, const Config& config,
                          Time horizon) {
  if (horizon < config.t + 1) {
    throw ValidationError("oracle horizon must be at least t+1");
  }
  const int t = config.t;
  // ah is needed up to horizon + t + 1 for the publication-time window.
  const int extended = horizon + t + 1;
  const std::vector<int> x = DiscoveredCounts(failures, config, extended);
  std::vector<int> ah(extended + 1);
  for (int k = 0; k <= extended; ++k) ah[k] = k + t + 1 - x[k];

  OracleTable table;
  table.config = config;
  table.rows.resize(horizon + 1);
  for (int k = 0; k <= horizon; ++k) {
    OracleRow& row = table.rows[k];
    row.k = k;
    row.x = x[k];
    row.rh = t + 1 - x[k];
    row.ah = ah[k];
    row.bb = *std::min_element(ah.begin() + k, ah.begin() + k + t + 2);
    row.clean = k >= 1 && IsCleanRound(failures, config, k);
  }
  table.first_clean = FirstCleanRound(failures, config);
  return table;
}

int PublicationTime(const FailurePattern& failures, const Config& config,
                    Time k) {
  const int t = config.t;
  const std::vector<int> x = DiscoveredCounts(failures, config, k + t + 1);
  int best = std::numeric_limits<int>::max();
  for (int j = k; j <= k + t + 1; ++j) best = std::min(best, j + t + 1 - x[j]);
  return best;
}

HorizonProfile BestHorizons(const Trace& trace) {
  const int length = trace.length();
  const int t = trace.config.t;
  const ProcessSet forever = trace.failures.AliveForever(trace.config);
  HorizonProfile out;
  out.min_h.assign(length + 1, std::nullopt);
  out.min_hg.assign(length + 1, std::nullopt);
  out.best_h.assign(length + 1, std::nullopt);
  for (Time k = 1; k <= length; ++k) {
    const TimeStep& step = trace.at(k);
    for (ProcessId p = 1; p <= trace.config.n; ++p) {
      const auto& rec = step.at(p);
      if (!rec) continue;
      out.min_h[k] = std::min(out.min_h[k].value_or(rec->horz), rec->horz);
      if (forever.contains(p)) {
        out.min_hg[k] = std::min(out.min_hg[k].value_or(rec->horz), rec->horz);
      }
    }
  }
  // minHG(k'+1) <= t+1, so offsets beyond k+t cannot win the minimum.
  for (Time k = 0; k + t + 1 <= length; ++k) {
    int best = std::numeric_limits<int>::max();
    for (Time j = k; j <= k + t; ++j) best = std::min(best, j + *out.min_hg[j + 1]);
    out.best_h[k] = best;
  }
  return out;
}

}  // namespace firesquad
