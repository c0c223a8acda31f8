// Copyright 2026 The hldsim Authors
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

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(HLDSIM_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hldsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, DecodeZeroSyndromeIsIdentity) {
  const CliRun r = run("decode --decoder ped -d 3 --syndrome 00000000");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "x 000000000\nz 000000000\n");
}

TEST_F(Cli, DecodeWorkedExample) {
  std::string s(24, '0');
  s[8] = '1';
  const CliRun r = run("decode --decoder ped -d 5 --syndrome " + s);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "x " + std::string(25, '0') + "\nz " + std::string(23, '0') + "11\n");
}

TEST_F(Cli, LayoutDump) {
  const CliRun r = run("layout -d 3");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"distance\": 3"), std::string::npos);
  EXPECT_EQ(run("layout -d 4").status, 5);
}

TEST_F(Cli, ExitStatuses) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("decode --no-such-flag 1").status, 2);
  EXPECT_EQ(run("decode --decoder ped -d 3 --syndrome 0101").status, 5);
  EXPECT_EQ(run("decode --decoder bogus --syndrome 00000000").status, 5);
  EXPECT_EQ(run("decode --decoder hld --syndrome 00000000").status, 4);
  EXPECT_EQ(run("decode --decoder hld --syndrome 00000000 --checkpoint " + path("none.ckpt")).status, 4);
  EXPECT_EQ(run("fit --input " + path("none.csv")).status, 4);

  std::ofstream(path("bad.ini")) << "distance = 3\nnot_an_option = 7\n";
  EXPECT_EQ(run("decode --config " + path("bad.ini")).status, 3);
  EXPECT_EQ(run("decode --config " + path("missing.ini")).status, 3);
  std::ofstream(path("bad.ckpt")) << "junk\n";
  EXPECT_EQ(run("decode --decoder hld --syndrome 00000000 --checkpoint " + path("bad.ckpt")).status, 3);

  // No crossing: the trivial decoder stays above the line at d=3 over this grid.
  EXPECT_EQ(run("eval --decoder trivial --shots 2000 --eps 0.2,0.3 -o " + path("e.csv")).status, 0);
  EXPECT_EQ(run("eval --decoder mwpm --shots 100 --eps 0.1 -o /nonexistent/dir/e.csv").status, 7);
}

TEST_F(Cli, ConfigFileDrivesSubcommand) {
  std::ofstream(path("run.ini")) << "distance = 3\ndecoder = ped\nsyndrome = 00100000\n";
  const CliRun r = run("decode --config " + path("run.ini"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "x 000000000\nz 001000000\n");
}

TEST_F(Cli, EvalIsReproducibleAndFits) {
  const std::string args = "eval --decoder mwpm -d 3 --shots 20000 --eps-count 8 --seed 4";
  ASSERT_EQ(run(args + " -o " + path("a.csv")).status, 0);
  ASSERT_EQ(run(args + " --threads 2 -o " + path("b.csv")).status, 0);
  const std::string a = slurp(path("a.csv"));
  EXPECT_EQ(body(a), body(slurp(path("b.csv"))));
  const auto rows = lines(a);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].rfind("# hldsim ", 0), 0u);
  EXPECT_NE(rows[0].find("config_hash="), std::string::npos);
  EXPECT_NE(rows[0].find("seed=4"), std::string::npos);
  EXPECT_EQ(rows[1], "distance,decoder,eps_p,eps_l,shots,failures,variance");
  EXPECT_EQ(rows[2].rfind("3,mwpm,0.03", 0), 0u);

  const CliRun fit = run("fit --input " + path("a.csv"));
  ASSERT_EQ(fit.status, 0);
  EXPECT_NE(fit.out.find("\"header\""), std::string::npos);
  EXPECT_NE(fit.out.find("\"p_th\""), std::string::npos);
  EXPECT_NE(fit.out.find("\"decoder\": \"mwpm\""), std::string::npos);
}

TEST_F(Cli, CostReport) {
  const CliRun r = run("cost -d 5 --n1 16 --n2 8 --bits 6");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"bitops\""), std::string::npos);
  EXPECT_NE(r.out.find("\"hidden1\""), std::string::npos);
  EXPECT_EQ(run("cost -d 5 --n1 16 --n2 8").status, 5);
}

TEST_F(Cli, TrainWritesLogAndCheckpoint) {
  const std::string args = "train -d 3 --n1 8 --n2 4 --batch-size 64 --batches 40 --log-every 20 --seed 2 "
                           "--checkpoint " + path("net.ckpt") + " --train-log ";
  ASSERT_EQ(run(args + path("log1.csv")).status, 0);
  const auto log = lines(slurp(path("log1.csv")));
  ASSERT_EQ(log.size(), 4u);
  EXPECT_EQ(log[1], "iteration,samples_seen,ler,loss");
  EXPECT_EQ(log[3].rfind("2,2560,", 0), 0u);
  ASSERT_TRUE(fs::exists(path("net.ckpt")));
  const std::string ckpt = slurp(path("net.ckpt"));
  ASSERT_EQ(run(args + path("log2.csv")).status, 0);
  EXPECT_EQ(body(slurp(path("log1.csv"))), body(slurp(path("log2.csv"))));
  EXPECT_EQ(ckpt, slurp(path("net.ckpt")));

  const CliRun d = run("decode --decoder hld --syndrome 00000000 --checkpoint " + path("net.ckpt"));
  EXPECT_EQ(d.status, 0);
  EXPECT_EQ(d.out.substr(0, 2), "x ");

  ASSERT_EQ(run("eval --decoder hld --bits 9 --shots 2000 --eps 0.05,0.1 --checkpoint " + path("net.ckpt") +
                " -o " + path("hld.csv"))
                .status,
            0);
  EXPECT_EQ(lines(slurp(path("hld.csv"))).size(), 4u);
}

TEST_F(Cli, SweepHasOneRowPerCell) {
  const std::string args =
      "sweep -d 3 --n1-list 8,16 --n2-list 4 --bits-list 3,5 --batch-size 64 --batches 20 "
      "--shots 2000 --eps-count 6 --seed 3";
  ASSERT_EQ(run(args + " -o " + path("s1.csv")).status, 0);
  const std::string text = slurp(path("s1.csv"));
  const auto rows = lines(text);
  ASSERT_EQ(rows.size(), 6u);
  const std::string header =
      "distance,n1,n2,transfer,rotated,bits,status,p_th,ci_low,ci_high,slope,pp_bits,fa_count,"
      "tree_depth,bitops,error";
  EXPECT_EQ(rows[1], header);
  const std::array<std::string, 4> cells = {"3,8,4,sqnl,1,3,", "3,8,4,sqnl,1,5,", "3,16,4,sqnl,1,3,",
                                            "3,16,4,sqnl,1,5,"};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(rows[2 + i].rfind(cells[i], 0), 0u) << rows[2 + i];
    EXPECT_EQ(std::count(rows[2 + i].begin(), rows[2 + i].end(), ','), 15) << rows[2 + i];
  }
  ASSERT_EQ(run(args + " -o " + path("s2.csv")).status, 0);
  EXPECT_EQ(body(text), body(slurp(path("s2.csv"))));

  // A failing cell is reported in place.
  ASSERT_EQ(run("sweep -d 3 --n1-list 6 --n2-list 4 --bits-list 0 --batches 2 --batch-size 8 --shots 100 -o " +
                path("s3.csv"))
                .status,
            0);
  const auto bad = lines(slurp(path("s3.csv")));
  ASSERT_EQ(bad.size(), 3u);
  EXPECT_NE(bad[2].find(",error,"), std::string::npos) << bad[2];

  const CliRun p = run("pareto --input " + path("s1.csv") + " --perf-column p_th --cost-column bitops");
  EXPECT_TRUE(p.status == 0 || p.status == 5) << p.status;
}

TEST_F(Cli, ParetoOnHandWrittenTable) {
  std::ofstream(path("t.csv")) << "# comment\ndistance,bitops,p_th\n3,10,0.05\n3,20,0.04\n5,30,0.09\n";
  const CliRun r = run("pareto --input " + path("t.csv"));
  ASSERT_EQ(r.status, 0);
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[1], "distance,bitops,p_th");
  EXPECT_EQ(out[2], "3,10,0.05");
  EXPECT_EQ(out[3], "5,30,0.09");
  const CliRun b = run("pareto --budget-report --input " + path("t.csv"));
  ASSERT_EQ(b.status, 0);
  EXPECT_EQ(lines(b.out)[1], "budget,p_th,distance,row");
  EXPECT_EQ(run("pareto --cost-column nope --input " + path("t.csv")).status, 3);
}

}  // namespace
