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

#ifndef FIRESQUAD_ORACLE_H_
#define FIRESQUAD_ORACLE_H_

#include <optional>
#include <vector>

#include "firesquad/types.h"

namespace firesquad {

struct Trace;

// Failures known at time k to the processes alive at time k, under
// full-information failure discovery: every process relays everything it
// knows each round, and a missing message reveals its sender as faulty.
ProcessSet DiscoveredFailures(const FailurePattern& failures,
                              const Config& config, Time k);

// x(F, k) = |DiscoveredFailures(F, k)|, for k in [0, horizon].
std::vector<int> DiscoveredCounts(const FailurePattern& failures,
                                  const Config& config, Time horizon);

// A crash in round r is silent if no process alive at time r is blocked
// from its round-r message.
bool FailsSilently(const FailurePattern& failures, const Config& config,
                   ProcessId p);

// Round r >= 1 is clean iff no process fails silently in round r-1 and every
// process failing in round r fails silently.
bool IsCleanRound(const FailurePattern& failures, const Config& config,
                  int round);

// r_c, the first clean round.
int FirstCleanRound(const FailurePattern& failures, const Config& config);

struct OracleRow {
  Time k = 0;
  int x = 0;   // discovered failures
  int rh = 0;  // horizon distance t+1-x
  int ah = 0;  // absolute horizon k+rh
  int bb = 0;  // publication time min_{k'>=k} ah(k')
  bool clean = false;  // whether round k is clean (false for k = 0)
};

struct OracleTable {
  Config config;
  std::vector<OracleRow> rows;  // rows[k] for k in [0, horizon]
  int first_clean = 0;

  const OracleRow& at(Time k) const { return rows[k]; }
  int horizon() const { return static_cast<int>(rows.size()) - 1; }
};

// Requires horizon >= t+1. The publication-time minimum only needs ah over
// [k, k+t+1]: ah(k') >= k'+1 > k+t+1 >= ah(k) beyond that window.
OracleTable ComputeOracle(const FailurePattern& failures, const Config& config,
                          Time horizon);

// bb(F, k).
int PublicationTime(const FailurePattern& failures, const Config& config,
                    Time k);

// Horizon statistics read back from a protocol trace. Entries are nullopt
// where undefined (time 0) or where the trace is too short to decide.
struct HorizonProfile {
  std::vector<std::optional<int>> min_h;    // over processes alive at k
  std::vector<std::optional<int>> min_hg;   // over processes that never crash
  std::vector<std::optional<int>> best_h;   // min_{k'>=k} k' + minHG(k'+1)

  std::optional<int> BestH(Time k) const {
    return k >= 0 && k < static_cast<int>(best_h.size()) ? best_h[k]
                                                         : std::nullopt;
  }
};

HorizonProfile BestHorizons(const Trace& trace);

}  // namespace firesquad

#endif  // FIRESQUAD_ORACLE_H_
