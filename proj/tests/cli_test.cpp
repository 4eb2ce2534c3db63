// End-to-end tests of the command-line tool: spawns the real binary and
// inspects exit codes and emitted files.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nivfunc/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("nivfunc_cli_" + std::to_string(counter++));
  fs::create_directories(dir);
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(NIVFUNC_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("nivfunc_out_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("rates subcommand prints the tuning table") {
  const fs::path out = fresh_dir("rates");
  const RunResult res = run_cli(
      "rates --set name=unit --set p=1 --set s=1 --set a=1 --set n_grid=10000 "
      "--set master_seed=5 --out " +
      out.string());
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("10000,10,0.0001") != std::string::npos);
  const std::string csv = slurp(out / "rates.csv");
  CHECK(csv.find("n,k_star,delta_star,") == 0);
  CHECK(csv.find("10000,10,0.0001") != std::string::npos);
}

TEST_CASE("simulate is reproducible byte for byte") {
  const std::string common =
      "simulate --config " + std::string(NIVFUNC_CONFIG_DIR) +
      "/poly_rate.conf --set n_grid=400,800 --set reps=25";
  const fs::path out1 = fresh_dir("sim1");
  const fs::path out2 = fresh_dir("sim2");
  const RunResult r1 = run_cli(common + " --threads 1 --out " + out1.string());
  const RunResult r2 = run_cli(common + " --threads 4 --out " + out2.string());
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  const std::string csv1 = slurp(out1 / "records.csv");
  REQUIRE_FALSE(csv1.empty());
  CHECK(csv1 == slurp(out2 / "records.csv"));
  CHECK(csv1.find("n,rep,seed,m,alpha,estimate,truth,sq_error,truncated,inv_norm\n") == 0);

  SUBCASE("the summary echo closes the reproduction loop") {
    const auto summary = nlohmann::json::parse(slurp(out1 / "summary.json"));
    const fs::path echo_conf = out1 / "echo.conf";
    std::ofstream(echo_conf) << summary["config_text"].get<std::string>();
    const fs::path out3 = fresh_dir("sim3");
    const RunResult r3 =
        run_cli("simulate --config " + echo_conf.string() + " --out " + out3.string());
    REQUIRE(r3.exit_code == 0);
    CHECK(slurp(out3 / "records.csv") == csv1);
  }
}

TEST_CASE("hard-instance subcommand dumps the least-favorable pair") {
  const fs::path out = fresh_dir("hard");
  const RunResult res = run_cli(
      "hard-instance --set name=unit --set p=1 --set s=1 --set a=1 --set d=1 --set rho=1 "
      "--set tau=1 --set triangle=1 --set n_grid=100 --set master_seed=5 --n 100 --k-star 2 "
      "--out " +
      out.string());
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "hard_instance.json"));
  CHECK(j["phi_coef"].get<double>() == doctest::Approx(0.141421).epsilon(1e-5));
  CHECK(j["xi"].get<double>() == 0.5);
  CHECK(j["h_coef"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("bounds subcommand passes on the shipped deviation scenario") {
  const fs::path out = fresh_dir("bounds");
  const RunResult res = run_cli("bounds --config " + std::string(NIVFUNC_CONFIG_DIR) +
                                "/bernstein.conf --set reps=150 --out " + out.string());
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "bounds.json"));
  CHECK(j["pass"].get<bool>());
  CHECK(j["deviation"]["pass"].get<bool>());
  CHECK(j["bias"]["pass"].get<bool>());
}

TEST_CASE("configuration errors exit with status 2") {
  SUBCASE("unreadable config file") {
    const RunResult res = run_cli("simulate --config /nonexistent/x.conf");
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("config error") != std::string::npos);
  }

  SUBCASE("unknown key carries its line number") {
    const fs::path dir = fresh_dir("badkey");
    const fs::path conf = dir / "bad.conf";
    std::ofstream(conf) << "scenario = poly-rate\nmaster_seed = 1\nbogus_key = 3\n";
    const RunResult res = run_cli("simulate --config " + conf.string());
    CHECK(res.exit_code == 2);
    CHECK(res.err.find(":3:") != std::string::npos);
    CHECK(res.err.find("bogus_key") != std::string::npos);
  }

  SUBCASE("a master seed is mandatory") {
    const RunResult res = run_cli("simulate --set scenario=poly-rate");
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("master_seed") != std::string::npos);
  }

  SUBCASE("inconsistent tuning is rejected before sampling") {
    const RunResult res = run_cli(
        "simulate --set scenario=poly-rate --set master_seed=3 --set J=1 "
        "--set n_grid=2000,4000");
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("exceeds J") != std::string::npos);
  }

  SUBCASE("unwritable output directory") {
    const RunResult res = run_cli(
        "rates --set scenario=poly-rate --set master_seed=3 --out /proc/nivfunc_forbidden");
    CHECK(res.exit_code == 2);
  }
}

TEST_CASE("shipped config files parse to the built-in presets") {
  for (const std::string name :
       {"poly_rate", "poly_parametric", "exp_rate", "bernstein"}) {
    const auto cfg =
        nivfunc::parse_config_file(std::string(NIVFUNC_CONFIG_DIR) + "/" + name + ".conf");
    const nivfunc::Scenario from_file = nivfunc::scenario_from_config(cfg);
    std::string preset_name = name;
    for (auto& ch : preset_name)
      if (ch == '_') ch = '-';
    nivfunc::Scenario preset = *nivfunc::scenario_preset(preset_name);
    preset.master_seed = from_file.master_seed;  // file seed is authoritative
    CHECK(nivfunc::canonical_config_text(from_file) == nivfunc::canonical_config_text(preset));
  }
}
