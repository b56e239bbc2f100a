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

#ifndef FIRESQUAD_PROTOCOL_H_
#define FIRESQUAD_PROTOCOL_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "firesquad/types.h"

namespace firesquad {

// Which transition function to run. kFireSquad is the real protocol; the
// others exist so the explorer can show that its invariant catalog notices
// when a consistency check goes missing, and so swiftness can be compared
// against a baseline.
enum class Variant {
  kFireSquad,
  // Horizon computed from reported failures only (no min with direct
  // observations).
  kWithoutCheckI,
  // The monotonicity max over view entries is skipped.
  kWithoutCheckII,
  // Horizon pinned at t+1: fires exactly t+1 rounds after a GO.
  kFixedDelay,
};

std::string_view VariantName(Variant v);
// Accepts the names produced by VariantName(); throws ValidationError.
Variant ParseVariant(std::string_view name);

struct Inbound {
  ProcessId sender;
  const Message* message;
};

struct StepOutcome {
  ProcessState state;
  bool fired = false;
  // Horizon distance computed this step, in [1, t+1].
  int horz = 0;
  // Union of the fail sets received this step (not persisted).
  ProcessSet reported_failures;
  // Bit i set iff the monotonicity check raised view[i].
  std::uint64_t check_two_raised = 0;

  const Message& outgoing() const { return state; }
};

// The message a process emits before its first step.
inline Message MakeInitialMessage(const ProcessState& state) { return state; }

// One iteration of the protocol loop at process `self`: `received` holds the
// round's messages (including self's own), `input` is the external GO bit.
// Throws ValidationError if `received` lacks self's message or a message has
// the wrong layout.
StepOutcome Step(ProcessId self, const ProcessState& prev,
                 std::span<const Inbound> received, int input,
                 const Config& config, Variant variant = Variant::kFireSquad);

}  // namespace firesquad

#endif  // FIRESQUAD_PROTOCOL_H_
