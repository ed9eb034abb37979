#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qdyn/csv.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/experiment.hpp"
#include "qdyn/version.hpp"

using namespace qdyn;
namespace fs = std::filesystem;

namespace {

fs::path config_path(const std::string& name) {
  return fs::path(QDYN_CONFIG_DIR) / name;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("qdyn_exp_" + tag);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double summary_value(const fs::path& out_dir, const std::string& quantity) {
  CsvTable table = read_csv(out_dir / "summary.csv");
  for (const auto& row : table.rows) {
    if (std::get<std::string>(row[0]) == quantity) {
      return std::stod(std::get<std::string>(row[1]));
    }
  }
  FAIL("summary.csv has no row ", quantity);
  return 0.0;
}

}  // namespace

TEST_CASE("the perturbative pipeline writes its tables deterministically") {
  std::ostringstream log;
  fs::path dir_a = fresh_dir("dirac_a");
  fs::path dir_b = fresh_dir("dirac_b");
  run_single("dirac", config_path("magnetic_pulse_dirac.cfg"), dir_a, log);
  run_single("dirac", config_path("magnetic_pulse_dirac.cfg"), dir_b, log);

  for (const char* name : {"first_order.csv", "rk4_norms.csv", "euler_norm.csv", "summary.csv",
                           "manifest.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir_a / name));
  }
  // reruns of the same scenario are byte identical
  CHECK(slurp(dir_a / "first_order.csv") == slurp(dir_b / "first_order.csv"));
  CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));

  std::string manifest = slurp(dir_a / "manifest.json");
  CHECK(manifest.find(version_string) != std::string::npos);
  CHECK(manifest.find("\"subcommand\": \"dirac\"") != std::string::npos);

  // the diagonal pulse produces no first-order transitions at all
  CsvTable first = read_csv(dir_a / "first_order.csv");
  for (const auto& row : first.rows) {
    CHECK(std::stod(std::get<std::string>(row[4])) == 0.0);
  }

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("the observable pipeline reports the conserved values") {
  std::ostringstream log;
  fs::path dir = fresh_dir("quasicanon");
  run_single("quasicanon", config_path("uniform_e_scalar.cfg"), dir, log);
  CHECK(fs::exists(dir / "trajectories.csv"));
  CHECK(fs::exists(dir / "invariance.csv"));
  CHECK(fs::exists(dir / "poisson.csv"));
  // from an eigenstate the first-order energy never moves
  CHECK(std::abs(summary_value(dir, "energy_initial") - 0.5) <= 1e-12);
  CHECK(std::abs(summary_value(dir, "energy_final") - 0.5) <= 1e-12);
  fs::remove_all(dir);
}

TEST_CASE("comparison joins two summaries on the quantity column") {
  fs::path dir = fresh_dir("compare");
  fs::create_directories(dir);

  CsvTable a;
  a.header = {"quantity", "value"};
  a.rows.push_back({std::string{"p01"}, 2.0e-4});
  a.rows.push_back({std::string{"norm_drift"}, 1.0e-14});
  a.rows.push_back({std::string{"only_in_a"}, 1.0});
  a.write(dir / "a.csv");

  CsvTable b;
  b.header = {"quantity", "value"};
  b.rows.push_back({std::string{"p01"}, 1.0e-4});
  b.rows.push_back({std::string{"norm_drift"}, 1.0e-14});
  b.write(dir / "b.csv");

  std::ostringstream log;
  run_compare(dir / "a.csv", dir / "b.csv", dir / "diff.csv", log);
  CsvTable diff = read_csv(dir / "diff.csv");
  REQUIRE(diff.header.size() == 5);
  CHECK(diff.header[0] == "quantity");
  CHECK(diff.header[3] == "abs_diff");
  REQUIRE(diff.rows.size() == 2);  // only the shared quantities are joined
  CHECK(std::get<std::string>(diff.rows[0][0]) == "p01");
  CHECK(std::stod(std::get<std::string>(diff.rows[0][3])) == doctest::Approx(1e-4));
  CHECK(std::stod(std::get<std::string>(diff.rows[0][4])) == doctest::Approx(0.5));

  // a file without the expected header is a configuration error
  CsvTable bad;
  bad.header = {"name", "value"};
  bad.rows.push_back({std::string{"p01"}, 1.0});
  bad.write(dir / "bad.csv");
  CHECK_THROWS_AS(run_compare(dir / "bad.csv", dir / "b.csv", dir / "diff2.csv", log),
                  ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("sweeps fan out into per-scenario directories") {
  std::ostringstream log;
  fs::path root = fresh_dir("sweep");
  run_sweep("quasicanon",
            {config_path("uniform_e_scalar.cfg"), config_path("magnetic_pulse_quasicanon.cfg")},
            root, log);
  CHECK(fs::exists(root / "uniform_e_scalar" / "manifest.json"));
  CHECK(fs::exists(root / "uniform_e_scalar" / "trajectories.csv"));
  CHECK(fs::exists(root / "magnetic_pulse_quasicanon" / "manifest.json"));
  std::string text = log.str();
  CHECK(text.find("[uniform_e_scalar]") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("unknown subcommands are configuration errors") {
  std::ostringstream log;
  fs::path dir = fresh_dir("badsub");
  CHECK_THROWS_AS(run_single("euler", config_path("uniform_e_scalar.cfg"), dir, log),
                  ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("guarded maps exceptions onto process exit codes") {
  std::ostringstream err;
  CHECK(guarded([] {}, err) == 0);
  CHECK(guarded([] { throw ConfigError("run.dt", "must be positive"); }, err) == 2);
  CHECK(guarded([] { throw PolicyError("rk4_step_cap", "dt too large"); }, err) == 3);
  CHECK(guarded([] { throw std::runtime_error("disk on fire"); }, err) == 1);
  std::string text = err.str();
  CHECK(text.find("config error") != std::string::npos);
  CHECK(text.find("policy error") != std::string::npos);
}
