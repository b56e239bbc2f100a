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

// Drives the firesquad binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Result {
  int status = -1;
  std::string out;
};

std::string Data(const std::string& name) {
  return std::string(FIRESQUAD_TESTDATA) + "/" + name;
}

Result Cli(const std::string& args) {
  const std::string cmd = std::string(FIRESQUAD_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::filesystem::path TempPath(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("firesquad_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(CliRunTest, GoAtThreeFiresAtFive) {
  const Result r = Cli("run " + Data("go_at_three.json") + " --verdict");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("stab 0; fires at [5]"), std::string::npos) << r.out;
}

TEST(CliRunTest, PhantomFireIsBeforeStabilization) {
  const Result r = Cli("run " + Data("phantom.json") + " --verdict");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("stab 2; fires at [1]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("safety at 1"), std::string::npos);
  EXPECT_NE(r.out.find("(before stabilization)"), std::string::npos);
}

TEST(CliRunTest, BadConfigIsAUsageError) {
  const Result r = Cli("run " + Data("bad_config.json"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("t < n - 1"), std::string::npos) << r.out;
}

TEST(CliRunTest, MissingFileAndBadFlags) {
  EXPECT_EQ(Cli("run /nonexistent/scenario.json").status, 2);
  EXPECT_EQ(Cli("run").status, 2);
  EXPECT_EQ(Cli("frobnicate").status, 2);
  EXPECT_EQ(Cli("--help").status, 0);
}

TEST(CliRunTest, OutputIsDeterministic) {
  const auto a = TempPath("a.jsonl");
  const auto b = TempPath("b.jsonl");
  ASSERT_EQ(Cli("run " + Data("phantom.json") + " --trace " + a.string())
                .status,
            0);
  ASSERT_EQ(Cli("run " + Data("phantom.json") + " --trace " + b.string())
                .status,
            0);
  EXPECT_EQ(Slurp(a), Slurp(b));
  EXPECT_FALSE(Slurp(a).empty());
}

TEST(CliCheckTest, GoldenTraceRechecksIdentically) {
  const auto trace = TempPath("golden.jsonl");
  const Result run = Cli("run " + Data("go_at_three.json") + " --verdict --trace " +
                         trace.string());
  ASSERT_EQ(run.status, 0);
  const Result check = Cli("check " + trace.string() + " --from 0");
  EXPECT_EQ(check.status, 0) << check.out;
  EXPECT_NE(check.out.find("FS(0) holds"), std::string::npos) << check.out;
  const std::string verdict_line = run.out.substr(run.out.find("{\"stab\""));
  EXPECT_NE(check.out.find(verdict_line), std::string::npos)
      << run.out << "\n---\n" << check.out;
}

TEST(CliCheckTest, DeletedFireIsReported) {
  const auto trace = TempPath("corrupt.jsonl");
  ASSERT_EQ(Cli("run " + Data("go_at_three.json") + " --trace " +
                trace.string())
                .status,
            0);
  std::string text = Slurp(trace);
  // Time 5 is the fire; clear p2's flag only.
  const std::size_t line = text.find("{\"k\":5,");
  ASSERT_NE(line, std::string::npos);
  std::size_t pos = text.find("\"fired\":true", line);
  pos = text.find("\"fired\":true", pos + 1);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 12, "\"fired\":false");
  std::ofstream(trace) << text;
  const Result check = Cli("check " + trace.string());
  EXPECT_EQ(check.status, 1) << check.out;
  EXPECT_NE(check.out.find("simultaneity at 5: fired {1,3} but not {2}"),
            std::string::npos)
      << check.out;
}

TEST(CliCheckTest, MalformedTraceIsAUsageError) {
  const auto trace = TempPath("garbage.jsonl");
  std::ofstream(trace) << "{\"format\":\"firesquad-trace\"\n";
  EXPECT_EQ(Cli("check " + trace.string()).status, 2);
}

TEST(CliOracleTest, PublicationTimes) {
  const Result none = Cli("oracle " + Data("go_at_three.json") +
                          " --n 4 --t 2 --horizon 4");
  EXPECT_EQ(none.status, 0) << none.out;
  EXPECT_NE(none.out.find("bb(F,0) = 3"), std::string::npos) << none.out;

  const Result loud =
      Cli("oracle " + Data("double_loud.json") + " --n 4 --t 2");
  EXPECT_EQ(loud.status, 0) << loud.out;
  EXPECT_NE(loud.out.find("bb(F,0) = 2"), std::string::npos) << loud.out;
  EXPECT_NE(loud.out.find("\"publication_time\":2"), std::string::npos);

  const Result silent = Cli("oracle " + Data("silent.json") + " --n 3 --t 1");
  EXPECT_NE(silent.out.find("r_c = 1"), std::string::npos) << silent.out;
  EXPECT_NE(silent.out.find("{\"k\":2,\"x\":1,\"rh\":1,\"ah\":3,\"bb\":3,"
                            "\"clean\":false}"),
            std::string::npos)
      << silent.out;

  EXPECT_EQ(Cli("oracle " + Data("silent.json")).status, 2);
}

TEST(CliSweepTest, SmallSweepIsClean) {
  const auto report = TempPath("report.json");
  const Result r = Cli("sweep " + Data("sweep_small.json") +
                       " --jobs 2 --report " + report.string());
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("patterns 25"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("violations 0"), std::string::npos);
  EXPECT_NE(Slurp(report).find("\"total_violations\":0"), std::string::npos);
}

}  // namespace
