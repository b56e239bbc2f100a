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

#ifndef FIRESQUAD_IO_H_
#define FIRESQUAD_IO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "firesquad/checker.h"
#include "firesquad/engine.h"
#include "firesquad/explorer.h"
#include "firesquad/oracle.h"
#include "firesquad/types.h"

// JSON encodings of scenarios, traces, oracle tables, verdicts and sweeps.
// Every document carries "format" and "version" fields; unknown fields are
// rejected.

namespace firesquad {

inline constexpr int kFormatVersion = 1;

// Malformed or inconsistent input text.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// How a scenario file spells its initial states. Kept so that a parsed file
// serializes back to the same text.
struct InitialStateSource {
  enum class Kind { kCanonical, kSeeded, kExplicit };
  Kind kind = Kind::kCanonical;
  std::uint64_t seed = 0;
};

struct ScenarioFile {
  Scenario scenario;
  InitialStateSource source;
  // False when the file left the length out and a default was filled in.
  bool explicit_length = true;
};

// States for "seed:<u64>": std::mt19937_64 seeded with the value, one
// RandomProcessState draw per process in id order.
std::vector<ProcessState> SeededStates(const Config& config,
                                       std::uint64_t seed);

ScenarioFile ParseScenario(std::string_view text);
std::string SerializeScenario(const ScenarioFile& file);
// Serializes with explicit states.
std::string SerializeScenario(const Scenario& scenario);

// Either a bare list of crash records or a scenario document. In the second
// case the scenario's config is returned too.
struct FailureFile {
  FailurePattern failures;
  std::optional<Config> config;
};
FailureFile ParseFailures(std::string_view text);

// One JSON object per line: a header with config, patterns, length and
// variant, then one line per time 0..L.
void WriteTrace(std::ostream& out, const Trace& trace, Variant variant);
Trace ReadTrace(std::istream& in);

std::string VerdictToJson(const FsVerdict& verdict);
std::string FsCheckToJson(const FsCheck& check, Time from);
std::string OracleToJson(const OracleTable& table);
// Aligned text table plus the r_c and bb(F,0) summary.
std::string OracleToText(const OracleTable& table);

// Sweep spec documents. `jobs` is not part of the file.
SweepSpec ParseSweepSpec(std::string_view text);
std::string SerializeSweepSpec(const SweepSpec& spec);
std::string SweepReportToJson(const SweepReport& report);
std::string SweepReportToText(const SweepReport& report);

std::string ReadFile(const std::string& path);

}  // namespace firesquad

#endif  // FIRESQUAD_IO_H_
