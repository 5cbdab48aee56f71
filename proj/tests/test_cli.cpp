#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Exercises the installed binary end to end through the MZSIM_BIN
// environment variable that the test harness sets.

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

const char* binaryPath() { return std::getenv("MZSIM_BIN"); }

#define SKIP_WITHOUT_BINARY() \
  if (!binaryPath()) GTEST_SKIP() << "MZSIM_BIN not set"

CliResult runCli(const std::string& args) {
  CliResult res;
  const std::string cmd = std::string(binaryPath()) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[512];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string tempPath(const std::string& leaf) {
  return (std::filesystem::temp_directory_path() / leaf).string();
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string constantWeatherCsv(int hours) {
  std::ostringstream out;
  out << "time_h,t_ae_c,wind_ms,wind_dir_deg,i_bh_wm2,i_dh_wm2,rh_out\n";
  for (int h = 0; h < hours; ++h) out << h << ",15,1,0,0,100,0.6\n";
  return out.str();
}

} // namespace

// ============================================================================
// Usage errors
// ============================================================================

TEST(Cli, RequiresASubcommand) {
  SKIP_WITHOUT_BINARY();
  CliResult res = runCli("");
  EXPECT_EQ(res.exit_code, 64);
  EXPECT_NE(res.output.find("subcommand"), std::string::npos);
}

TEST(Cli, RejectsUnknownFlagsWithUsageExit) {
  SKIP_WITHOUT_BINARY();
  EXPECT_EQ(runCli("collector --frobnicate").exit_code, 64);
  EXPECT_EQ(runCli("--bogus").exit_code, 64);
}

TEST(Cli, RejectsMissingFilesWithUsageExit) {
  SKIP_WITHOUT_BINARY();
  CliResult res = runCli("validate /nonexistent/building.json");
  EXPECT_EQ(res.exit_code, 64);
}

// ============================================================================
// validate
// ============================================================================

TEST(Cli, ValidateAcceptsEmittedModels) {
  SKIP_WITHOUT_BINARY();
  const std::string path = tempPath("mzsim_cli_collector.json");
  ASSERT_EQ(runCli("collector --emit-building " + path).exit_code, 0);
  CliResult res = runCli("validate " + path);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.output.rfind("ok:", 0), 0u) << res.output;

  const std::string trombe = tempPath("mzsim_cli_trombe.json");
  ASSERT_EQ(runCli("trombe --emit-building " + trombe).exit_code, 0);
  EXPECT_EQ(runCli("validate " + trombe).exit_code, 0);
}

TEST(Cli, ValidateListsViolationsAndExitsTwo) {
  SKIP_WITHOUT_BINARY();
  const std::string path = tempPath("mzsim_cli_bad.json");
  writeFile(path, R"({"zones":[{"name":"a","volume":-1}]})");
  CliResult res = runCli("validate " + path);
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("volume must be positive"), std::string::npos)
      << res.output;
}

TEST(Cli, ValidateReportsParseErrorsAndExitsTwo) {
  SKIP_WITHOUT_BINARY();
  const std::string path = tempPath("mzsim_cli_mangled.json");
  writeFile(path, "{ not json");
  CliResult res = runCli("validate " + path);
  EXPECT_EQ(res.exit_code, 2);
}

// ============================================================================
// Scenario benches
// ============================================================================

TEST(Cli, CollectorPrintsSummaryAndWritesCsv) {
  SKIP_WITHOUT_BINARY();
  const std::string out = tempPath("mzsim_cli_collector.csv");
  CliResult res = runCli("collector --days 2 --warmup 1 --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("P_u="), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("eff="), std::string::npos) << res.output;

  const std::string csv = readFile(out);
  EXPECT_EQ(csv.rfind("time_h,t_ae_c", 0), 0u);
  EXPECT_NE(csv.find("t_cavity_c"), std::string::npos);
}

TEST(Cli, TrombePrintsDeliveryAndAcceptsHoleModes) {
  SKIP_WITHOUT_BINARY();
  CliResult res = runCli("trombe --days 2 --warmup 1 --out " +
                         tempPath("mzsim_cli_trombe.csv"));
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("delivered="), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("eff="), std::string::npos) << res.output;

  EXPECT_EQ(runCli("trombe --holes closed --days 1 --out " +
                   tempPath("mzsim_cli_trombe2.csv"))
                .exit_code,
            0);
}

TEST(Cli, SweepEmitsRowsInDeclaredOrder) {
  SKIP_WITHOUT_BINARY();
  const std::string out = tempPath("mzsim_cli_sweep.csv");
  CliResult res =
      runCli("sweep collector flow 5,1,10 --days 2 --warmup 1 --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;

  std::istringstream csv(readFile(out));
  std::string line;
  ASSERT_TRUE(std::getline(csv, line));
  EXPECT_EQ(line, "flow_m3h,useful_power_w,efficiency,dt_out_k");
  std::vector<double> flows;
  while (std::getline(csv, line))
    flows.push_back(std::strtod(line.c_str(), nullptr));
  ASSERT_EQ(flows.size(), 3u);
  EXPECT_DOUBLE_EQ(flows[0], 5.0);
  EXPECT_DOUBLE_EQ(flows[1], 1.0);
  EXPECT_DOUBLE_EQ(flows[2], 10.0);
}

// ============================================================================
// simulate
// ============================================================================

TEST(Cli, SimulateRunsAnEmittedModelAgainstWeather) {
  SKIP_WITHOUT_BINARY();
  const std::string building = tempPath("mzsim_cli_sim_building.json");
  const std::string weather = tempPath("mzsim_cli_sim_weather.csv");
  const std::string out = tempPath("mzsim_cli_sim_out.csv");
  ASSERT_EQ(runCli("collector --emit-building " + building).exit_code, 0);
  writeFile(weather, constantWeatherCsv(24));

  CliResult res = runCli("simulate --building " + building + " --weather " +
                         weather + " --days 1 --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  std::istringstream csv(readFile(out));
  int lines = 0;
  std::string line;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 25); // header + one row per hour
}

TEST(Cli, SimulateSelectsOutputGroups) {
  SKIP_WITHOUT_BINARY();
  const std::string building = tempPath("mzsim_cli_sim_building.json");
  const std::string weather = tempPath("mzsim_cli_sim_weather.csv");
  const std::string out = tempPath("mzsim_cli_sim_groups.csv");
  ASSERT_EQ(runCli("collector --emit-building " + building).exit_code, 0);
  writeFile(weather, constantWeatherCsv(24));

  CliResult res = runCli("simulate --building " + building + " --weather " +
                         weather + " --days 1 --outputs zone_t --out " + out);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  std::istringstream csv(readFile(out));
  std::string header;
  ASSERT_TRUE(std::getline(csv, header));
  EXPECT_EQ(header, "time_h,t_ae_c,t_cavity_c");
}

TEST(Cli, SimulateReportsWeatherErrorsAndExitsTwo) {
  SKIP_WITHOUT_BINARY();
  const std::string building = tempPath("mzsim_cli_sim_building.json");
  const std::string weather = tempPath("mzsim_cli_sim_badweather.csv");
  ASSERT_EQ(runCli("collector --emit-building " + building).exit_code, 0);
  writeFile(weather,
            "time_h,t_ae_c,wind_ms,wind_dir_deg,i_bh_wm2,i_dh_wm2,rh_out\n"
            "0,warm,0,0,0,0,0.5\n");
  CliResult res =
      runCli("simulate --building " + building + " --weather " + weather);
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_NE(res.output.find("line 2"), std::string::npos) << res.output;
}

// ============================================================================
// Determinism
// ============================================================================

TEST(Cli, RepeatedRunsAreByteIdentical) {
  SKIP_WITHOUT_BINARY();
  const std::string a = tempPath("mzsim_cli_det_a.csv");
  const std::string b = tempPath("mzsim_cli_det_b.csv");
  ASSERT_EQ(runCli("collector --days 2 --warmup 1 --out " + a).exit_code, 0);
  ASSERT_EQ(runCli("collector --days 2 --warmup 1 --out " + b).exit_code, 0);
  const std::string ca = readFile(a);
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, readFile(b));
}
