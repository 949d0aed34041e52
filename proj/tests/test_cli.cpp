#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "herding/commands.hpp"
#include "herding/csv.hpp"
#include "herding/errors.hpp"
#include "herding/meanfield.hpp"

using namespace herding;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string run(CommandStatus (*command)(const RunConfig&, std::ostream&), const RunConfig& config,
                CommandStatus* status = nullptr) {
  std::ostringstream out;
  const CommandStatus s = command(config, out);
  if (status) *status = s;
  return out.str();
}

std::string capture(const std::string& command) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string text;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe.get())) > 0) text.append(buffer.data(), got);
  return text;
}

}  // namespace

TEST(Csv, FormatsTwelveSignificantDigits) {
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(std::nan("")), "");
}

TEST(RunConfig, SweepPoints) {
  RunConfig config;
  config.eta_start = 0.2;
  config.eta_end = 0.4;
  config.eta_steps = 3;
  const auto etas = config.requested_etas();
  ASSERT_EQ(etas.size(), 3u);
  EXPECT_DOUBLE_EQ(etas[1], 0.3);
  config.eta_steps = 0;
  EXPECT_THROW(config.validate(), ParameterDomainError);
  config.eta_steps = 3;
  config.eta_start = 0.5;
  EXPECT_THROW(config.validate(), ParameterDomainError);
}

TEST(CmdScatter, SingleRowAndColumns) {
  RunConfig config;
  config.eta_start = 0.5;
  config.eta_steps = 1;
  config.realizations = 1;
  CommandStatus status;
  const auto rows = parse_csv(run(cmd_scatter, config, &status));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"eta", "realization", "q_final", "steps", "herder_updates",
                                                "converged", "basin", "q_minus", "q_u", "q_plus"}));
  EXPECT_EQ(rows[1].size(), rows[0].size());
  EXPECT_EQ(rows[1][0], "0.5");
  EXPECT_EQ(status.rows, 1u);
}

TEST(CmdScatter, IdenticalAcrossRunsAndWorkers) {
  RunConfig config;
  config.eta_start = 0.3;
  config.eta_end = 1.0;
  config.eta_steps = 4;
  config.realizations = 6;
  config.seed = 99;
  const std::string first = run(cmd_scatter, config);
  EXPECT_EQ(first, run(cmd_scatter, config));
  config.workers = 3;
  EXPECT_EQ(first, run(cmd_scatter, config));
  config.seed = 100;
  EXPECT_NE(first, run(cmd_scatter, config));
}

TEST(CmdBranches, EndpointsAndSingleTransition) {
  RunConfig config;
  config.eta_start = 0.0;
  config.eta_end = 1.0;
  config.eta_steps = 101;
  CommandStatus status;
  const auto rows = parse_csv(run(cmd_branches, config, &status));
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"eta", "q_minus", "q_u", "q_plus", "regime"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "", "", format_real(omega(0.55, 11)), "Monostable"}));
  EXPECT_EQ(rows.back(), (std::vector<std::string>{"1", "0", "0.5", "1", "Bistable"}));

  const double eta_c = find_eta_c(0.55, 11);
  int transitions = 0;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    if (rows[i][4] != rows[i - 1][4]) ++transitions;
    const double eta = std::stod(rows[i][0]);
    if (rows[i][4] != "Degenerate") EXPECT_EQ(rows[i][4] == "Bistable", eta > eta_c) << "eta=" << eta;
  }
  EXPECT_EQ(transitions, 1);
}

TEST(CmdQmean, AnalyticOnlyAtEtaOne) {
  RunConfig config;
  config.eta_start = 1.0;
  config.eta_steps = 1;
  config.realizations = 0;
  const auto rows = parse_csv(run(cmd_qmean, config));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].size(), 10u);
  EXPECT_EQ(rows[1][1], "Bistable");
  EXPECT_EQ(rows[1][2], "0.5");
  EXPECT_EQ(rows[1][5], "");
}

TEST(CmdQmean, MonostablePointHasNoSplitting) {
  RunConfig config;
  config.eta_start = 0.2;
  config.eta_steps = 1;
  config.realizations = 20;
  const auto rows = parse_csv(run(cmd_qmean, config));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][1], "Monostable");
  EXPECT_EQ(rows[1][3], "");
  EXPECT_FALSE(rows[1][5].empty());
  EXPECT_EQ(rows[1][8], "20");
}

TEST(CmdNash, SingleLineWithSmallResidual) {
  RunConfig config;
  config.tol = 1e-9;
  const auto rows = parse_csv(run(cmd_nash, config));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"eta_star", "q_mean", "eta_c", "residual"}));
  const double eta_star = std::stod(rows[1][0]);
  const double eta_c = std::stod(rows[1][2]);
  EXPECT_GT(eta_star, eta_c);
  EXPECT_LT(eta_star, 1.0);
  EXPECT_LE(std::stod(rows[1][3]), 1e-4);
}

TEST(CmdLangevin, Columns) {
  RunConfig config;
  config.eta_start = 0.9;
  config.eta_steps = 1;
  config.realizations = 100;
  const auto rows = parse_csv(run(cmd_langevin, config));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"eta", "regime", "p_minus_quadrature", "lower_fraction",
                                                "lower_stderr", "timeout_fraction", "paths", "within_3se"}));
  EXPECT_EQ(rows[1][6], "100");
}

TEST(Executable, ConfigFileWithOverrides) {
  const std::string path = ::testing::TempDir() + "herding_cli_test.ini";
  {
    std::ofstream config(path);
    config << "# sweep\nn = 300\np = 0.6\nk = 7\neta-start = 0.5\neta-steps = 1\n";
  }
  const std::string binary = HERDING_CLI_PATH;
  const auto from_file = parse_csv(capture(binary + " --config " + path + " branches 2>/dev/null"));
  ASSERT_EQ(from_file.size(), 2u);
  EXPECT_EQ(from_file[1][0], "0.5");
  EXPECT_EQ(from_file[1][3], format_real(find_fixed_points({0.5, 0.6, 7}).q_plus()));

  const auto overridden = parse_csv(capture(binary + " --config " + path + " --p 0.7 branches 2>/dev/null"));
  ASSERT_EQ(overridden.size(), 2u);
  EXPECT_EQ(overridden[1][3], format_real(find_fixed_points({0.5, 0.7, 7}).q_plus()));
}

TEST(Executable, RejectsBadInput) {
  const std::string binary = HERDING_CLI_PATH;
  EXPECT_NE(std::system((binary + " --k 4 branches >/dev/null 2>&1").c_str()), 0);
  EXPECT_NE(std::system((binary + " >/dev/null 2>&1").c_str()), 0);
}
