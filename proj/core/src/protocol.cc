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

#include "firesquad/protocol.h"

#include <algorithm>
#include <limits>
#include <string>

namespace firesquad {

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kFireSquad:
      return "fire-squad";
    case Variant::kWithoutCheckI:
      return "without-check-1";
    case Variant::kWithoutCheckII:
      return "without-check-2";
    case Variant::kFixedDelay:
      return "fixed-delay";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kFireSquad, Variant::kWithoutCheckI,
                    Variant::kWithoutCheckII, Variant::kFixedDelay}) {
    if (VariantName(v) == name) return v;
  }
  throw ValidationError("unknown protocol variant: " + std::string(name));
}

StepOutcome Step(ProcessId self, const ProcessState& prev,
                 std::span<const Inbound> received, int input,
                 const Config& config, Variant variant) {
  const int t = config.t;
  const int req_size = config.req_size();
  const int view_size = config.view_size();

  bool heard_self = false;
  for (const Inbound& in : received) {
    if (in.sender == self) heard_self = true;
    if (static_cast<int>(in.message->req.size()) != req_size ||
        static_cast<int>(in.message->view.size()) != view_size) {
      throw ValidationError("message from process " +
                            std::to_string(in.sender) + " has wrong layout");
    }
    if (!IsSanitized(*in.message, config)) {
      throw ValidationError("message from process " +
                            std::to_string(in.sender) +
                            " carries out-of-domain values");
    }
  }
  if (!heard_self) {
    throw ValidationError("process " + std::to_string(self) +
                          " did not receive its own message");
  }

  StepOutcome out;
  ProcessState& s = out.state;
  s.req.assign(req_size, 0);
  s.view = prev.view;
  if (static_cast<int>(s.view.size()) != view_size) {
    throw ValidationError("previous state has wrong layout");
  }

  s.req[0] = input != 0 ? 1 : 0;
  for (int i = 1; i <= t + 1; ++i) {
    int m = 0;
    for (const Inbound& in : received) m = std::max(m, in.message->req[i - 1]);
    s.req[i] = m;
  }

  ProcessSet reported;
  ProcessSet heard;
  for (const Inbound& in : received) {
    reported |= in.message->fail;
    heard.insert(in.sender);
  }
  out.reported_failures = reported;
  s.fail = config.processes() - heard;

  // view[t] keeps its previous value here.
  for (int i = 1; i <= t; ++i) {
    int m = std::numeric_limits<int>::max();
    for (const Inbound& in : received) m = std::min(m, in.message->view[i]);
    s.view[i - 1] = m + 1;
  }

  int discovered = 0;
  switch (variant) {
    case Variant::kFireSquad:
    case Variant::kWithoutCheckII:
      discovered = std::min(reported.size(), s.fail.size());
      break;
    case Variant::kWithoutCheckI:
      discovered = reported.size();
      break;
    case Variant::kFixedDelay:
      discovered = 0;
      break;
  }
  // Only reachable through corrupted fail sets in the check-I mutant.
  discovered = std::min(discovered, t);
  const int horz = t + 1 - discovered;
  out.horz = horz;
  s.view[horz - 1] = 1;

  if (variant != Variant::kWithoutCheckII) {
    for (int i = 0; i <= t; ++i) {
      if (horz - i > s.view[i]) {
        s.view[i] = horz - i;
        out.check_two_raised |= std::uint64_t{1} << i;
      }
    }
  }
  for (int& v : s.view) v = std::clamp(v, 0, t + 1);

  for (int i = s.view[0]; i <= t + 1; ++i) {
    if (s.req[i] == 1) {
      std::fill(s.req.begin() + i, s.req.end(), 0);
      out.fired = true;
      break;
    }
  }
  return out;
}

}  // namespace firesquad
