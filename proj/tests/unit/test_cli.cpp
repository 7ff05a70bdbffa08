#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "staforge/error.hpp"
#include "staforge/langevin.hpp"

using namespace staforge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = STAFORGE_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("staforge_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Runs the installed binary; returns its exit status.
int run(const std::string& args, const fs::path& out, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(STAFORGE_CLI_PATH) + "' --out '" + out.string() + "' " + args +
                          " > '" + (out / "stdout.txt").string() + "' 2> '" + (out / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error(const json& doc) {
  try {
    cli::parse_device(doc, "doc");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "accepted " << doc.dump();
  return "";
}

json minimal_device() {
  return json::parse(R"({"name": "x", "drive_freq_ghz": 6.0,
                         "modes": [{"detuning_mhz": 1.0, "kappa_mhz": 2.0}],
                         "drive_coupling": [1]})");
}

}  // namespace

TEST(Config, ShippedDevicesLoad) {
  const auto dev = cli::load_device(kConfigs / "paper_device.json");
  EXPECT_EQ(dev.network.n_modes(), 4);
  ASSERT_EQ(dev.blocks.size(), 2u);
  EXPECT_NEAR(std::abs(dev.io.gamma - cplx(0.98, -0.17)), 0.0, 1e-15);
  const auto one = cli::load_device(kConfigs / "single_mode.json");
  EXPECT_EQ(one.network.n_modes(), 1);
  EXPECT_EQ(one.blocks.size(), 1u);
}

TEST(Config, ErrorsNameTheField) {
  json d = minimal_device();
  EXPECT_NO_THROW(cli::parse_device(d, "doc"));

  d = minimal_device();
  d.erase("modes");
  EXPECT_NE(config_error(d).find("modes"), std::string::npos);

  d = minimal_device();
  d["modes"][0]["kappa_mhz"] = -1.0;
  EXPECT_NE(config_error(d).find("kappa_mhz"), std::string::npos);

  d = minimal_device();
  d["drive_coupling"] = {1, 0};
  EXPECT_NE(config_error(d).find("drive_coupling"), std::string::npos);

  d = minimal_device();
  d["modes"][0]["detuning_mhz"] = "fast";
  EXPECT_NE(config_error(d).find("detuning_mhz"), std::string::npos);
}

TEST(Config, MalformedJsonReportsTheLine) {
  const fs::path dir = scratch("malformed");
  std::ofstream(dir / "bad.json") << "{\n  \"name\": \"x\",\n  \"modes\": [,]\n}\n";
  try {
    cli::read_json(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("bad.json:3"), std::string::npos) << e.what();
  }
}

TEST(Config, ComplexValues) {
  EXPECT_EQ(cli::parse_complex(json(2.5), "f"), cplx(2.5));
  EXPECT_EQ(cli::parse_complex(json::parse("[1, -2]"), "f"), cplx(1, -2));
  EXPECT_THROW(cli::parse_complex(json::parse("[1, 2, 3]"), "f"), Error);
  EXPECT_EQ(cli::parse_complex(cli::complex_json(cplx(0.5, 0.25)), "f"), cplx(0.5, 0.25));
}

TEST(Config, ProblemDefaultsAndOverrides) {
  const auto p = cli::parse_problem(json::parse(R"({"m": 12, "tf_ns": 80, "epsf": [0, 1]})"), "doc");
  EXPECT_EQ(p.m, 12);
  EXPECT_EQ(p.tf_ns, 80.0);
  EXPECT_EQ(p.epsf, cplx(0, 1));
  EXPECT_EQ(p.eps0, cplx(0.0));
  EXPECT_THROW(cli::parse_problem(json::parse(R"({"m": 0})"), "doc"), Error);
}

TEST(EquilibrationTime, ExponentialApproach) {
  const auto t = uniform_grid(0.0, 1000.0, 10001);
  std::vector<cplx> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) v[i] = 1.0 - std::exp(-t[i] / 100.0);
  // Measured against the last sample: e^{-t/100} - e^{-10} <= 0.01 (1 - e^{-10}).
  const double ef = std::exp(-10.0);
  const double expect = -100.0 * std::log(0.01 * (1 - ef) + ef);
  EXPECT_GE(cli::equilibration_time(t, v), expect);
  EXPECT_LT(cli::equilibration_time(t, v), expect + 0.1);
}

TEST(Binary, HybridizeWritesTheReport) {
  const fs::path out = scratch("hyb");
  ASSERT_EQ(run("--verify hybridize '" + (kConfigs / "paper_device.json").string() + "'", out), 0);
  const json r = json::parse(slurp(out / "hybridize.json"));
  ASSERT_EQ(r["hybrid_modes"].size(), 4u);
  EXPECT_NEAR(r["hybrid_modes"][1]["lifetime_ns"].get<double>(), 62.88, 0.7);
  EXPECT_EQ(r["blocks"].size(), 2u);
}

TEST(Binary, CdVerifiesAndWritesArtifacts) {
  const fs::path out = scratch("cd");
  ASSERT_EQ(run("--verify cd '" + (kConfigs / "single_mode.json").string() + "' --tf 100", out), 0)
      << slurp(out / "stderr.txt");
  for (const char* f : {"pulse_cd.csv", "trace_cd.csv", "ro_cd.csv", "iq.svg", "cd_summary.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
}

TEST(Binary, MmocRerunsAreByteIdenticalAcrossThreadCounts) {
  const std::string cfg = "'" + (kConfigs / "paper_device.json").string() + "'";
  const fs::path a = scratch("mmoc_a"), b = scratch("mmoc_b");
  ASSERT_EQ(run("--verify mmoc " + cfg, a, "STA_FORGE_THREADS=1"), 0) << slurp(a / "stderr.txt");
  ASSERT_EQ(run("--verify mmoc " + cfg, b, "STA_FORGE_THREADS=4"), 0);
  for (const char* f : {"solution.json", "sections.csv", "pulse.csv", "trace_block0.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Binary, ReportsErrorsThroughTheExitCode) {
  const fs::path out = scratch("errors");
  EXPECT_EQ(run("hybridize '" + (out / "missing.json").string() + "'", out), 2);
  EXPECT_NE(slurp(out / "stderr.txt").find("missing.json"), std::string::npos);
  std::ofstream(out / "bad.json") << "{\"modes\": []}";
  EXPECT_EQ(run("hybridize '" + (out / "bad.json").string() + "'", out), 2);
  EXPECT_NE(run("no-such-command", out), 0);
  EXPECT_EQ(run("mmoc '" + (kConfigs / "paper_device.json").string() + "' --m 2", out), 2);
}

TEST(Binary, QslAndLindbladChecksPass) {
  const fs::path out = scratch("qsl");
  EXPECT_EQ(run("--verify qsl", out), 0) << slurp(out / "stdout.txt");
  EXPECT_TRUE(fs::exists(out / "qsl.csv"));
  EXPECT_EQ(run("--verify lindblad-check --alpha-max 2", out), 0) << slurp(out / "stdout.txt");
  EXPECT_TRUE(fs::exists(out / "fidelity.csv"));
}
