// Copyright 2026 The puma3pc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

// Runs the built `puma` binary as a subprocess.

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run puma(const std::string& args) {
  const std::string cmd = std::string(PUMA_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parse(const Run& r) {
  try {
    return nlohmann::json::parse(r.out);
  } catch (const nlohmann::json::exception& e) {
    ADD_FAILURE() << "not JSON: " << e.what() << "\n" << r.out;
    return {};
  }
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("puma_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(Cli, VerifyGelu) {
  const auto r = puma("verify gelu --n 4096 --seed 7");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = parse(r);
  EXPECT_EQ(j.at("protocol"), "gelu");
  EXPECT_EQ(j.at("n"), 4096);
  EXPECT_EQ(j.at("passed"), true);
  EXPECT_LE(j.at("max_err").get<double>(), 1.0 / 1024);
  EXPECT_GT(j.at("bytes_per_party").get<long>(), 0);
}

TEST(Cli, VerifySoftmaxWritesJsonFile) {
  const auto path = scratch("softmax.json");
  const auto r = puma("verify softmax --n 128 --json " + path.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream in(path);
  const auto file = nlohmann::json::parse(in);
  EXPECT_EQ(file, parse(r));
  EXPECT_EQ(file.at("passed"), true);
  std::filesystem::remove(path);
}

TEST(Cli, VerifyIsDeterministic) {
  const auto a = puma("verify layernorm --n 64 --seed 3");
  const auto b = puma("verify layernorm --n 64 --seed 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(puma("--help").code, 0);
  EXPECT_EQ(puma("verify no_such_protocol").code, 2);
  EXPECT_EQ(puma("verify gelu --n notanumber").code, 2);
  EXPECT_EQ(puma("frobnicate").code, 2);
  EXPECT_EQ(puma("bench mul --mode sim --party 1").code, 2);
}

TEST(Cli, BenchCountsAreDeterministic) {
  const auto r = puma("bench mul --n 16 --repeat 3");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = parse(r);
  EXPECT_EQ(j.at("deterministic_counts"), true);
  ASSERT_EQ(j.at("runs").size(), 3u);
  for (const auto& run : j.at("runs")) {
    EXPECT_EQ(run.at("bytes_per_party"), 128);
    EXPECT_EQ(run.at("rounds"), 1);
  }
}

TEST(Cli, RandomWeightsThenInfer) {
  const auto model = scratch("model.pumaw");
  ASSERT_EQ(puma("random-weights --out " + model.string() +
                 " --layers 1 --d-model 16 --heads 2 --d-ff 32 --vocab 20 --max-seq 8 --seed 4")
                .code,
            0);
  const auto r = puma("infer --model " + model.string() + " --heads 2 --tokens 3,1,4 --steps 2 --compare");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = parse(r);
  EXPECT_EQ(j.at("match"), true) << r.out;
  EXPECT_EQ(j.at("generated").size(), 2u);
  EXPECT_EQ(puma("infer --model " + model.string() + " --heads 2 --tokens 25").code, 2);
  EXPECT_EQ(puma("infer --model " + model.string() + " --heads 3 --tokens 1").code, 1);

  std::ofstream(model, std::ios::binary | std::ios::trunc) << "PUMAW1";
  EXPECT_EQ(puma("infer --model " + model.string() + " --heads 2 --tokens 1").code, 1);
  std::filesystem::remove(model);
  EXPECT_EQ(puma("infer --model " + model.string() + " --heads 2 --tokens 1").code, 2);
}

}  // namespace
