#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swstream/cli.hpp"

namespace {
struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = swstream::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}
}  // namespace

TEST_CASE("analyze prints a measure,value table") {
  const CliResult r = run_cli({"analyze", "--source", "dsbs:p=0.11"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "measure,value");
  CHECK(lines[1].rfind("h_joint,", 0) == 0);
  // deterministic across runs
  CHECK(run_cli({"analyze", "--source", "dsbs:p=0.11"}).out == r.out);
  // bits mode divides by log 2
  const CliResult bits = run_cli({"analyze", "--source", "dsbs:p=0.11", "--bits"});
  CHECK(bits.out.find("h_y,1\n") != std::string::npos);
}

TEST_CASE("gain-region single row and grid") {
  const CliResult r = run_cli({"gain-region", "--source", "zchannel:delta=0.6"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "param,g1,g2");
  CHECK(lines[1].rfind("0.6,0.058893", 0) == 0);

  const CliResult grid = run_cli({"gain-region", "--source", "zchannel:delta=0.5", "--grid", "0.1:0.9:0.1"});
  REQUIRE(grid.code == 0);
  CHECK(lines_of(grid.out).size() == 10);
}

TEST_CASE("schedule reproduces the worked decoding table") {
  const CliResult r = run_cli({"schedule", "--psi", "8", "--omega", "3", "--delay", "2", "--k", "16"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("stage 1: decode blocks [7:12] using codewords [9:14]") != std::string::npos);
  CHECK(r.out.find("stage 2: decode blocks [13:15] using codewords [13:17]") != std::string::npos);
  CHECK(r.out.find("stage 3: decode blocks [16:16] using codewords [16:17]") != std::string::npos);
  CHECK(r.out.find("stage,block_lo,block_hi,cw_lo,cw_hi,bin_family") != std::string::npos);
  CHECK(r.out.find("1,7,9,9,14,B1") != std::string::npos);
  CHECK(r.out.find("8,16,16,16,17,B4") != std::string::npos);
}

TEST_CASE("validation failures exit with code 2") {
  CHECK(run_cli({"schedule", "--psi", "5", "--omega", "3", "--delay", "2", "--k", "4"}).code == 2);
  CHECK(run_cli({"analyze", "--source", "dsbs:p=0.7"}).code == 2);
  CHECK(run_cli({"analyze"}).code == 2);
  CHECK(run_cli({"no-such-command"}).code == 2);
  const CliResult r = run_cli({"analyze", "--source", "bogus:p=1"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("exponent modes") {
  const CliResult fixed =
      run_cli({"exponent", "--source", "dsbs:p=0.11", "--rx", "0.4", "--ry", "0.75", "--gamma", "0.5"});
  REQUIRE(fixed.code == 0);
  CHECK(fixed.out.find("e_x,") != std::string::npos);
  CHECK(fixed.out.find("e_y,") != std::string::npos);
  const CliResult min = run_cli({"exponent", "--source", "dsbs:p=0.11", "--rx", "0.4", "--ry", "0.75"});
  REQUIRE(min.code == 0);
  CHECK(min.out.find("min_e_x,") != std::string::npos);
  CHECK(min.out.find("argmin_gamma_x,") != std::string::npos);
}

TEST_CASE("md-constant output") {
  const CliResult r = run_cli({"md-constant", "--source", "zchannel:delta=0.6", "--case", "ii", "--theta1",
                               "1", "--theta2", "0", "--delay", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("nu_nonstreaming,") != std::string::npos);
  CHECK(r.out.find("nu_streaming_lower,") != std::string::npos);
  CHECK(r.out.find("g1,0.058893") != std::string::npos);
  CHECK(r.out.find("holds_gain_T,1") != std::string::npos);

  const CliResult two = run_cli({"md-constant", "--source", "zchannel:delta=0.6", "--case", "ii", "--theta1",
                                 "1", "--theta2", "0", "--delay", "5", "--delay2", "2"});
  REQUIRE(two.code == 0);
  CHECK(two.out.find("effective_delay,2") != std::string::npos);
}

TEST_CASE("simulate CSV shape and refusal exit code") {
  const CliResult r = run_cli({"simulate", "--source", "dsbs:p=0.05", "--n", "2", "--psi", "5", "--omega",
                               "2", "--delay", "2", "--blocks", "3", "--trials", "20", "--seed", "9",
                               "--rate-x", "0.6", "--rate-y", "0.6"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("k,errors,trials,eps_hat,ci_lo,ci_hi") != std::string::npos);
  CHECK(lines_of(r.out).size() >= 6);  // two comment lines, header, three rows

  const CliResult refused =
      run_cli({"simulate", "--source", "dsbs:p=0.05", "--n", "2", "--psi", "5", "--omega", "2", "--delay",
               "2", "--blocks", "3", "--trials", "5", "--seed", "9", "--rate-x", "0.1", "--rate-y", "0.1",
               "--cap", "16"});
  CHECK(refused.code == 3);
  CHECK(refused.err.find("refused") != std::string::npos);
}

TEST_CASE("simulate md mode mentions the diagnostic disclaimer") {
  const CliResult r = run_cli({"simulate", "--source", "dsbs:p=0.11", "--n", "2", "--psi", "5", "--omega",
                               "2", "--delay", "2", "--blocks", "2", "--trials", "20", "--seed", "3",
                               "--case", "ii", "--theta1", "1", "--theta2", "0", "--xi-t", "0.3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("diagnostic only") != std::string::npos);
}

TEST_CASE("bound CSV") {
  const CliResult r = run_cli({"bound", "--source", "dsbs:p=0.11", "--n", "50", "--psi", "8", "--omega",
                               "3", "--delay", "2", "--rx", "0.45", "--ry", "0.8", "--k", "20"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  CHECK(lines[0] == "family,log_bound,span,exponent");
  CHECK(lines.back().rfind("total,", 0) == 0);
}

TEST_CASE("--out writes the CSV to a file") {
  const std::string path = "/tmp/swstream_cli_out_test.csv";
  std::remove(path.c_str());
  const CliResult r = run_cli({"analyze", "--source", "asym:p=0.1", "--out", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first == "measure,value");
  std::remove(path.c_str());
}

TEST_CASE("config file drives a subcommand") {
  const std::string path = "/tmp/swstream_cli_cfg_test.cfg";
  {
    std::ofstream cfg(path);
    cfg << "# reproduce a g-curve sweep\n[gain-region]\nsource = \"zchannel:delta=0.5\"\ngrid = \"0.1:0.9:0.1\"\n";
  }
  const CliResult r = run_cli({"--config", path});
  REQUIRE(r.code == 0);
  CHECK(lines_of(r.out).size() == 10);
  std::remove(path.c_str());
}

TEST_CASE("custom source from CSV") {
  const std::string path = "/tmp/swstream_custom_pmf.csv";
  {
    std::ofstream f(path);
    f << "# 2x2 joint pmf, x-major rows\n0.4, 0.1\n0.2, 0.3\n";
  }
  const CliResult r = run_cli({"analyze", "--source", "custom:" + path});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("h_joint,") != std::string::npos);
  std::remove(path.c_str());
}
