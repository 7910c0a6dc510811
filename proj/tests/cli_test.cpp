// Copyright 2026 The qcert Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qcert/io.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qcert_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(Cli, WordsListsPromisedWords) {
  const auto r = run("words --problem eo:k=1 --max-len 6");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "word,label\n,y\nss,n\nssss,y\nssssss,n\n");
}

TEST_F(Cli, DfaCheckVerdicts) {
  EXPECT_EQ(run("dfa-check --problem cl").code, 0);
  const auto path = dir_ / "two.json";
  std::ofstream(path) << R"({"states": 2, "alphabet": ["s"], "delta": [[1], [0]], "initial": 0,
                             "labels": {"y": [0], "n": [1]}})";
  const auto r = run("dfa-check --problem eo:k=1 --dfa " + path.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(qcert::Json::parse(r.out)["counterexample"], "ss");
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("words --problem nope:k=1").code, 2);
  EXPECT_EQ(run("dfa-check --problem eo:k=1 --dfa /nonexistent.json").code, 2);
  EXPECT_EQ(run("survey --imax 3 --n 5").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
}

TEST_F(Cli, SearchReportsMinimum) {
  const auto r = run("search --problem eo:k=2 --max-states 8");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(qcert::Json::parse(r.out)["report"]["min_states"], 8);
  EXPECT_EQ(run("search --problem eo:k=2 --max-states 7").code, 1);
}

TEST_F(Cli, PfaOpt) {
  const auto j = qcert::Json::parse(run("pfa-opt --imax 3").out);
  EXPECT_NEAR(j["p_c"].get<double>(), 0.25, 1e-6);
  EXPECT_NEAR(j["alpha"].get<double>(), 2.0, 1e-5);
}

TEST_F(Cli, ClassifyEo) {
  EXPECT_EQ(run("classify-eo --k 1 --unitary sqrt_z").code, 0);
  EXPECT_EQ(run("classify-eo --k 1 --unitary z").code, 1);
  const auto r = run("classify-eo --k 2 --haar 20 --seed 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(qcert::Json::parse(r.out)["accepted"], 0);
}

TEST_F(Cli, QfaCheckCanonical) { EXPECT_EQ(run("qfa-check --problem diof:k=2 --max-len 8").code, 0); }

TEST_F(Cli, EbDemo) {
  const auto j = qcert::Json::parse(run("eb-demo").out);
  EXPECT_NEAR(j["success"].get<double>(), 0.71875, 1e-12);
}

TEST_F(Cli, SurveyIsByteIdenticalAcrossThreadsAndWritesManifest) {
  const auto a = dir_ / "a.csv", b = dir_ / "b.csv";
  ASSERT_EQ(run("survey --imax 3 --n 40 --seed 9 --threads 1 --out " + a.string()).code, 0);
  ASSERT_EQ(run("survey --imax 3 --n 40 --seed 9 --threads 3 --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto manifest = qcert::Json::parse(slurp(a.string() + ".manifest.json"));
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["problem"], "eo:k=1:imax=3");
}

TEST_F(Cli, NoiseCurveIsDeterministic) {
  const auto one = run("noise-curve --family dephasing --t-grid 0,0.1 --seed 4 --threads 1");
  const auto two = run("noise-curve --family dephasing --t-grid 0,0.1 --seed 4 --threads 2");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, two.out);
  EXPECT_EQ(one.out.rfind("family,t,p_fail,infid\n", 0), 0u);
}

TEST_F(Cli, IngestEval) {
  const auto path = dir_ / "channels.json";
  qcert::Json list = qcert::Json::array();
  list.push_back({{"id", "ideal"}, {"kraus", qcert::kraus_to_json(qcert::KrausChannel::unitary(qcert::gates::sqrt_x()))}});
  list.push_back({{"id", "bad"}, {"kraus", qcert::kraus_to_json(qcert::KrausChannel({2.0 * qcert::gates::identity()}))}});
  std::ofstream(path) << list.dump();
  const auto r = run("ingest-eval --channels " + path.string() + " --seed 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("id,index,seed,p_fail,infid,kraus_rank\nideal,0,", 0), 0u);
  EXPECT_EQ(r.out.find("bad"), std::string::npos);
}

}  // namespace
