#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

CliResult run_cli(const std::string& args) {
  const std::string out_path = "cli_stdout.tmp";
  const std::string command =
      std::string(SPOQC_CLI_BIN) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = read_file(out_path);
  std::remove(out_path.c_str());
  return result;
}

TEST(Cli, RatesPrintsFailurePlusAbort) {
  const auto result = run_cli("rates --eta 1 --k 3");
  EXPECT_EQ(result.exit_code, 0);
  EXPECT_NE(result.output.find("failure+abort=0.125"), std::string::npos)
      << result.output;
}

TEST(Cli, UnknownFlagFailsWithUsage) {
  const auto result = run_cli("rates --no-such-flag 1");
  EXPECT_EQ(result.exit_code, 1);
}

TEST(Cli, MissingSubcommandFails) {
  const auto result = run_cli("");
  EXPECT_EQ(result.exit_code, 1);
}

TEST(Cli, VerifyOpticsPasses) {
  const auto result = run_cli("verify-optics");
  EXPECT_EQ(result.exit_code, 0) << result.output;
  EXPECT_NE(result.output.find("overall max deviation"), std::string::npos);
}

TEST(Cli, CodeEmitsParseableJson) {
  const auto result = run_cli("code --distance 3");
  EXPECT_EQ(result.exit_code, 0);
  const auto j = nlohmann::json::parse(result.output);
  EXPECT_EQ(j.at("data").size(), 9u);
  EXPECT_EQ(j.at("checks").size(), 8u);
  EXPECT_EQ(j.at("params").at("d"), 3);
  EXPECT_TRUE(j.at("ldpc_report").at("passed").get<bool>());
}

TEST(Cli, CodeRejectsEvenDistance) {
  const auto result = run_cli("code --distance 4");
  EXPECT_EQ(result.exit_code, 1);
}

TEST(Cli, ThresholdDeterministicAndConfigRoundTrip) {
  const std::string base =
      "threshold --axis p_F --min 0.07 --max 0.11 --points 3 "
      "--distances 3 5 --shots 2000 --seed 7 --workers 2";
  const auto first = run_cli(base + " --csv cli_a.csv --json cli_a.json");
  ASSERT_EQ(first.exit_code, 0) << first.output;
  const auto second = run_cli(base + " --csv cli_b.csv --json cli_b.json");
  ASSERT_EQ(second.exit_code, 0);
  EXPECT_EQ(read_file("cli_a.csv"), read_file("cli_b.csv"));

  // Re-run from the echoed config alone.
  const auto third = run_cli("--config cli_a.json threshold --csv cli_c.csv --json cli_c.json");
  ASSERT_EQ(third.exit_code, 0) << third.output;
  EXPECT_EQ(read_file("cli_a.csv"), read_file("cli_c.csv"));

  const auto summary = nlohmann::json::parse(read_file("cli_a.json"));
  EXPECT_TRUE(summary.contains("build"));
  EXPECT_TRUE(summary.contains("config"));
  EXPECT_EQ(summary.at("config").at("shots"), 2000);
  for (const char* f : {"cli_a.csv", "cli_b.csv", "cli_c.csv", "cli_a.json",
                        "cli_b.json", "cli_c.json"})
    std::remove(f);
}

TEST(Cli, SampleWritesDump) {
  const auto result = run_cli(
      "sample --distance 3 --basis X --p-f 0.1 --shots 64 --seed 3 --out cli_shots.bin");
  EXPECT_EQ(result.exit_code, 0) << result.output;
  const std::string dump = read_file("cli_shots.bin");
  ASSERT_GE(dump.size(), 8u);
  EXPECT_EQ(dump.substr(0, 8), "SPQCSHOT");
  std::remove("cli_shots.bin");
}

TEST(Cli, TradeoffFromBorderFile) {
  {
    std::ofstream border("cli_border.csv");
    border << "p_F,t_th\n0.0,0.021\n0.03,0.0145\n0.06,0.0075\n0.092,0.0\n";
  }
  const auto result = run_cli(
      "tradeoff --border cli_border.csv --loss-max 0.03 --loss-points 31 "
      "--csv cli_tradeoff.csv --json cli_tradeoff.json");
  ASSERT_EQ(result.exit_code, 0) << result.output;
  const std::string csv = read_file("cli_tradeoff.csv");
  EXPECT_NE(csv.find("envelope,"), std::string::npos);
  const auto summary = nlohmann::json::parse(read_file("cli_tradeoff.json"));
  EXPECT_GT(summary.at("t_trial_intercept").get<double>(), 0.0);
  EXPECT_GT(summary.at("loss_intercept").get<double>(), 0.0);
  for (const char* f : {"cli_border.csv", "cli_tradeoff.csv", "cli_tradeoff.json"})
    std::remove(f);
}

TEST(Cli, HrusTradeoffSinglePhotonMatchesPlain) {
  {
    std::ofstream border("cli_border2.csv");
    border << "p_F,t_th\n0.0,0.021\n0.05,0.011\n0.092,0.0\n";
  }
  const auto plain = run_cli(
      "tradeoff --border cli_border2.csv --loss-max 0.02 --loss-points 11 "
      "--csv cli_plain.csv --json cli_plain.json");
  const auto hybrid = run_cli(
      "hrus-tradeoff --border cli_border2.csv --n-values 1 --loss-max 0.02 "
      "--loss-points 11 --csv cli_hybrid.csv --json cli_hybrid.json");
  ASSERT_EQ(plain.exit_code, 0);
  ASSERT_EQ(hybrid.exit_code, 0);
  // The n = 1 hybrid envelope equals the plain envelope rows.
  const std::string plain_csv = read_file("cli_plain.csv");
  const std::string hybrid_csv = read_file("cli_hybrid.csv");
  const auto envelope_rows = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
      if (line.rfind("envelope,", 0) == 0) out += line + "\n";
    return out;
  };
  EXPECT_EQ(envelope_rows(plain_csv), envelope_rows(hybrid_csv));
  for (const char* f : {"cli_border2.csv", "cli_plain.csv", "cli_plain.json",
                        "cli_hybrid.csv", "cli_hybrid.json"})
    std::remove(f);
}

}  // namespace
