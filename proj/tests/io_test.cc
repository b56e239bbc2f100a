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

#include "firesquad/io.h"

#include <gtest/gtest.h>

#include <sstream>

#include "test_util.h"

namespace firesquad {
namespace {

using testing::Canonical;
using testing::Crashes;
using testing::Gos;
using testing::MakeScenario;

constexpr std::string_view kScenario = R"({
  "format": "firesquad-scenario",
  "version": 1,
  "config": {"n": 3, "t": 1},
  "failures": [{"process": 2, "crash_round": 2, "blocked": [1]}],
  "inputs": [{"time": 3, "process": 1}],
  "initial_states": "canonical",
  "length": 9,
  "label": "demo"
})";

TEST(ScenarioIoTest, ParsesAllSections) {
  const ScenarioFile file = ParseScenario(kScenario);
  const Scenario& s = file.scenario;
  EXPECT_EQ(s.config, (Config{3, 1}));
  EXPECT_EQ(s.failures, Crashes({{2, 2, {1}}}));
  EXPECT_EQ(s.inputs, Gos({{3, 1}}));
  EXPECT_EQ(s.initial_states, Canonical(s.config));
  EXPECT_EQ(s.length, 9);
  EXPECT_EQ(s.label, "demo");
}

TEST(ScenarioIoTest, RoundTripsLosslessly) {
  const ScenarioFile file = ParseScenario(kScenario);
  const std::string text = SerializeScenario(file);
  EXPECT_EQ(SerializeScenario(ParseScenario(text)), text);

  std::string seeded(kScenario);
  seeded.replace(seeded.find("\"canonical\""), 11, "\"seed:99\"");
  const ScenarioFile s = ParseScenario(seeded);
  EXPECT_EQ(s.scenario.initial_states, SeededStates({3, 1}, 99));
  EXPECT_NE(SerializeScenario(s).find("seed:99"), std::string::npos);
  EXPECT_EQ(SerializeScenario(ParseScenario(SerializeScenario(s))),
            SerializeScenario(s));

  const std::string explicit_text = SerializeScenario(file.scenario);
  EXPECT_EQ(ParseScenario(explicit_text).scenario.initial_states,
            file.scenario.initial_states);
}

TEST(ScenarioIoTest, DefaultsLengthWhenAbsent) {
  std::string text(kScenario);
  text.replace(text.find("\"length\": 9,"), 12, "");
  const ScenarioFile file = ParseScenario(text);
  EXPECT_FALSE(file.explicit_length);
  EXPECT_EQ(file.scenario.length,
            DefaultRunLength({3, 1}, file.scenario.failures,
                             file.scenario.inputs));
  EXPECT_EQ(SerializeScenario(file).find("\"length\""), std::string::npos);
}

TEST(ScenarioIoTest, RejectsMalformedDocuments) {
  auto with = [](std::string_view from, std::string_view to) {
    std::string text(kScenario);
    text.replace(text.find(from), from.size(), to);
    return text;
  };
  EXPECT_THROW(ParseScenario("{"), ParseError);
  EXPECT_THROW(ParseScenario(with("\"label\"", "\"colour\"")), ParseError);
  EXPECT_THROW(ParseScenario(with("\"version\": 1", "\"version\": 2")),
               ParseError);
  EXPECT_THROW(ParseScenario(with("firesquad-scenario", "other")), ParseError);
  EXPECT_THROW(ParseScenario(with("\"canonical\"", "\"seed:-4\"")),
               ParseError);
  EXPECT_THROW(ParseScenario(with("\"canonical\"", "\"random\"")), ParseError);
  EXPECT_THROW(ParseScenario(with("\"t\": 1", "\"t\": 2")), ValidationError);
  EXPECT_THROW(ParseScenario(with("\"process\": 1}", "\"process\": 7}")),
               ValidationError);
  EXPECT_THROW(ParseScenario(with("\"canonical\"",
                                  R"([{"req":[0,0,0],"fail":[],"view":[2,9]},
                                      {"req":[0,0,0],"fail":[],"view":[2,2]},
                                      {"req":[0,0,0],"fail":[],"view":[2,2]}])")),
               ParseError);
  EXPECT_THROW(ParseScenario(with("\"time\": 3", "\"time\": \"3\"")),
               ParseError);
}

TEST(FailureIoTest, BareListOrScenario) {
  const FailureFile bare = ParseFailures(
      R"([{"process": 1, "crash_round": 1, "blocked": [2, 3]}])");
  EXPECT_EQ(bare.failures, Crashes({{1, 1, {2, 3}}}));
  EXPECT_FALSE(bare.config.has_value());
  const FailureFile full = ParseFailures(kScenario);
  EXPECT_EQ(full.config, (Config{3, 1}));
  EXPECT_THROW(ParseFailures(R"([{"process": 1, "round": 1}])"), ParseError);
}

TEST(TraceIoTest, RoundTripsEveryField) {
  const Config c{4, 2};
  const Scenario s = MakeScenario(c, Crashes({{2, 2, {1, 3}}}),
                                  Gos({{1, 1}, {4, 3}}),
                                  SeededStates(c, 5), 9);
  const Trace trace = firesquad::Run(s);
  std::stringstream buf;
  WriteTrace(buf, trace, Variant::kFireSquad);
  const Trace back = ReadTrace(buf);
  ASSERT_EQ(back.length(), trace.length());
  EXPECT_EQ(back.failures, trace.failures);
  EXPECT_EQ(back.inputs, trace.inputs);
  for (Time k = 0; k <= trace.length(); ++k) {
    for (ProcessId p = 1; p <= c.n; ++p) {
      const auto& a = trace.at(k).at(p);
      const auto& b = back.at(k).at(p);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (!a) continue;
      EXPECT_EQ(a->state, b->state);
      EXPECT_EQ(a->horz, b->horz);
      EXPECT_EQ(a->fired, b->fired);
      EXPECT_EQ(a->reported_failures, b->reported_failures);
      EXPECT_EQ(a->check_two_raised, b->check_two_raised);
      EXPECT_EQ(a->delivered, b->delivered);
    }
  }
  std::stringstream again;
  WriteTrace(again, back, Variant::kFireSquad);
  std::stringstream first;
  WriteTrace(first, trace, Variant::kFireSquad);
  EXPECT_EQ(again.str(), first.str());
}

TEST(TraceIoTest, RejectsTruncatedAndInconsistentTraces) {
  const Config c{3, 1};
  const Trace trace = firesquad::Run(MakeScenario(c, Crashes({{3, 1, {}}}), {},
                                       Canonical(c), 4));
  std::stringstream buf;
  WriteTrace(buf, trace, Variant::kFireSquad);
  const std::string text = buf.str();

  std::stringstream truncated(text.substr(0, text.rfind('{')));
  EXPECT_THROW(ReadTrace(truncated), ParseError);

  std::string revived = text;
  const std::size_t at = revived.find("null");
  ASSERT_NE(at, std::string::npos);
  const std::size_t rec = revived.find("{\"state\"");
  const std::size_t end = revived.find("},{", rec);
  revived.replace(at, 4, revived.substr(rec, end - rec + 1));
  std::stringstream zombie(revived);
  EXPECT_THROW(ReadTrace(zombie), ParseError);

  std::stringstream empty("");
  EXPECT_THROW(ReadTrace(empty), ParseError);
}

TEST(ReportIoTest, VerdictAndOracleRecords) {
  const Config c{3, 1};
  const Trace trace =
      firesquad::Run(MakeScenario(c, {}, Gos({{3, 1}}), Canonical(c), 10));
  EXPECT_EQ(VerdictToJson(Evaluate(trace)),
            R"({"stab":0,"simultaneity_from":0,"liveness_from":0,)"
            R"("safety_from":0,"fire_times":[5],"violations":[]})");
  const OracleTable table = ComputeOracle({}, {4, 2}, 3);
  const std::string text = OracleToText(table);
  EXPECT_NE(text.find("bb(F,0) = 3"), std::string::npos);
  EXPECT_NE(text.find("r_c = 1"), std::string::npos);
  EXPECT_NE(OracleToJson(table).find(
                R"({"k":1,"x":0,"rh":3,"ah":4,"bb":4,"clean":true})"),
            std::string::npos);
}

TEST(SweepIoTest, SpecRoundTrips) {
  SweepSpec spec;
  spec.config = {4, 2};
  spec.max_crash_round = 3;
  spec.states.random_joint = 12;
  spec.states.seed = 8;
  spec.input_policies = {InputPolicy::kPhantom, InputPolicy::kSequential};
  spec.run_length = 12;
  spec.pattern_limit = 40;
  spec.variant = Variant::kWithoutCheckII;
  const std::string text = SerializeSweepSpec(spec);
  EXPECT_EQ(SerializeSweepSpec(ParseSweepSpec(text)), text);
  EXPECT_THROW(ParseSweepSpec(R"({"format":"firesquad-sweep","version":1,
                                  "config":{"n":3,"t":1},"jobs":4})"),
               ParseError);
}

}  // namespace
}  // namespace firesquad
