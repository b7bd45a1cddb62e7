#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli/commands.h"
#include "cli/config.h"

namespace fs = std::filesystem;
using nlperim::cli::RunOptions;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlperim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string config(const std::string& name) { return std::string(NLPERIM_CONFIG_DIR) + "/" + name; }

int run(const std::string& cfg, const fs::path& out, std::vector<std::string> sets = {}) {
  RunOptions o;
  o.config_path = cfg;
  o.out_dir = out.string();
  o.overrides = std::move(sets);
  return nlperim::cli::run(o);
}

// Runs the binary, returning its exit status and stderr.
std::pair<int, std::string> run_binary(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd =
      std::string(NLPERIM_CLI_BINARY) + " " + args + " 2> " + err.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(err)};
}

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
  const auto c = nlperim::cli::Config::parse_string(
      "; top\n[set]\n; comment lines only\nkind = interval\na = 0\nb = 1\n");
  EXPECT_TRUE(c.has_section("set"));
  EXPECT_EQ(c.get("set.kind"), "interval");
  EXPECT_DOUBLE_EQ(c.number("set.b"), 1.0);
  EXPECT_FALSE(c.has_section("measure"));
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_ANY_THROW(nlperim::cli::Config::parse_string("[measure]\nkind = fractional\nalfa = 0.5\n"));
  auto c = nlperim::cli::Config::parse_string("[measure]\nkind = fractional\n");
  EXPECT_ANY_THROW(c.apply_override("measure.alfa=0.5"));
  EXPECT_NO_THROW(c.apply_override("measure.alpha=0.5"));
}

TEST(Cli, PerimeterOfUnitInterval) {
  const auto out = scratch("perimeter");
  ASSERT_EQ(run(config("perimeter_interval.ini"), out), 0);
  const auto j = nlohmann::json::parse(slurp(out / "result.json"));
  EXPECT_EQ(j["command"], "perimeter");
  EXPECT_NEAR(j["result"]["value"].get<double>(), 8.0, 8e-6);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["inputs_hash"], j["inputs_hash"]);
  EXPECT_TRUE(m.contains("libraries"));
}

TEST(Cli, OverridesChangeTheResult) {
  const auto out = scratch("override");
  ASSERT_EQ(run(config("perimeter_interval.ini"), out, {"measure.alpha=0.25"}), 0);
  const auto j = nlohmann::json::parse(slurp(out / "result.json"));
  EXPECT_NEAR(j["result"]["value"].get<double>(), 2 / (0.25 * 0.75), 1e-5);
}

TEST(Cli, ConstantsInTwoDimensions) {
  const auto out = scratch("constants");
  ASSERT_EQ(run(config("constants.ini"), out, {"run.d=2"}), 0);
  const auto j = nlohmann::json::parse(slurp(out / "result.json"))["result"];
  EXPECT_NEAR(j["kappa"].get<double>(), 2 * 3.141592653589793, 1e-14);
  EXPECT_NEAR(j["K1d"].get<double>(), 4.0, 1e-14);
}

TEST(Cli, MissingSectionIsAValidationError) {
  const auto dir = scratch("missing");
  const auto cfg = write(dir / "c.ini", "[run]\ncommand = perimeter\n[set]\nkind = interval\na = 0\nb = 1\n");
  const auto [code, err] = run_binary("run --config " + cfg.string() + " --out " + (dir / "o").string(), dir);
  EXPECT_EQ(code, 2);
  EXPECT_NE(err.find("[measure]"), std::string::npos) << err;
}

TEST(Cli, UnknownKeyIsAValidationError) {
  const auto dir = scratch("unknown");
  const auto [code, err] = run_binary("run --config " + config("perimeter_interval.ini") +
                                          " --set measure.alfa=0.3 --out " + (dir / "o").string(),
                                      dir);
  EXPECT_EQ(code, 2);
  EXPECT_NE(err.find("alfa"), std::string::npos) << err;
}

TEST(Cli, BadUsageExitsTwo) {
  const auto dir = scratch("usage");
  EXPECT_EQ(run_binary("run", dir).first, 2);
  EXPECT_EQ(run_binary("frobnicate", dir).first, 2);
}

TEST(Cli, ReproducibleBytes) {
  const auto a = scratch("repro_a"), b = scratch("repro_b");
  ASSERT_EQ(run(config("oracle_disk.ini"), a, {"run.samples=20000"}), 0);
  ASSERT_EQ(run(config("oracle_disk.ini"), b, {"run.samples=20000"}), 0);
  EXPECT_EQ(slurp(a / "result.json"), slurp(b / "result.json"));
  const auto c = scratch("repro_c");
  RunOptions o;
  o.config_path = config("oracle_disk.ini");
  o.out_dir = c.string();
  o.overrides = {"run.samples=20000"};
  o.seed = 99;
  ASSERT_EQ(nlperim::cli::run(o), 0);
  EXPECT_NE(slurp(a / "result.json"), slurp(c / "result.json"));
}

TEST(Cli, SweepWritesSeries) {
  const auto out = scratch("sweep");
  ASSERT_EQ(run(config("sweep_alpha_up.ini"), out), 0);
  const auto j = nlohmann::json::parse(slurp(out / "result.json"))["result"];
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["lambda_gate"]["passed"].get<bool>());
  std::ifstream csv(out / "series.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "param,C_eps,per_nu,normalized,target,residual,err_est,runtime_ms,regime");
}

TEST(Plot, EmptyCsvIsRejected) {
  const auto dir = scratch("plot_empty");
  const auto csv = write(dir / "empty.csv", "");
  EXPECT_EQ(nlperim::cli::plot(csv.string(), (dir / "p.gp").string()), 2);
}

TEST(Plot, OnePanelPerRegime) {
  const auto dir = scratch("plot_two");
  const auto up = scratch("plot_up"), down = scratch("plot_down");
  ASSERT_EQ(run(config("sweep_alpha_up.ini"), up), 0);
  ASSERT_EQ(run(config("aniso_up.ini"), down), 0);
  std::string both = slurp(up / "series.csv");
  const std::string second = slurp(down / "series.csv");
  both += second.substr(second.find('\n') + 1);
  const auto csv = write(dir / "both.csv", both);
  ASSERT_EQ(nlperim::cli::plot(csv.string(), (dir / "p.gp").string()), 0);
  const std::string gp = slurp(dir / "p.gp");
  std::size_t panels = 0;
  for (std::size_t at = gp.find("<< EOD"); at != std::string::npos; at = gp.find("<< EOD", at + 1)) ++panels;
  EXPECT_EQ(panels, 2u);
  EXPECT_NE(gp.find("multiplot"), std::string::npos);
}
