#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#ifndef HETNET_CLI_PATH
#error "HETNET_CLI_PATH must point at the command-line binary"
#endif

#ifdef _WIN32
#define WEXITSTATUS(s) (s)
#else
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "hetnet_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  std::string cmd = std::string("\"") + HETNET_CLI_PATH + "\" " + args + " >" + out.string() +
                    " 2>" + err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("build writes the system description and equations") {
  fs::path d = scratch_dir("build6");
  RunResult r = run_cli("build --n 6 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 0);
  nlohmann::json spec = nlohmann::json::parse(slurp(d / "o" / "spec_n6.json"));
  CHECK(spec["n"] == 6);
  CHECK(spec["mode"] == "explicit");
  CHECK(spec["epsilon"] == 0.01);  // auto-calibrated
  CHECK(spec["axis"]["axis_roots"].size() == 11);
  CHECK(spec["planes"].size() == 5);
  std::string eq = slurp(d / "o" / "equations_n6.txt");
  CHECK(eq.find("x'") != std::string::npos);
  CHECK(eq.find("y5'") != std::string::npos);
}

TEST_CASE("invalid requests exit with code 2 and a verbatim reason") {
  fs::path d = scratch_dir("invalid");
  RunResult r = run_cli("build --n 3 --mode general --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("general construction starts at n = 4") != std::string::npos);
  r = run_cli("build --n 41 --mode general --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 2);
  r = run_cli("build --n 2 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 2);
  r = run_cli("build --n 4 --mode nonsense --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 2);
  r = run_cli("plot --n 4 --plane 7 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 2);
  r = run_cli("--no-such-flag", d);
  CHECK(r.exit_code == 2);
  r = run_cli("", d);  // a subcommand is required
  CHECK(r.exit_code == 2);
  r = run_cli("--help", d);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("build") != std::string::npos);
}

TEST_CASE("verify emits a full report and repeats byte for byte") {
  fs::path d = scratch_dir("verify3");
  RunResult r = run_cli("verify --n 3 --out " + (d / "a").string(), d);
  CHECK(r.exit_code == 0);
  nlohmann::json rep = nlohmann::json::parse(slurp(d / "a" / "verify_n3.json"));
  CHECK(rep["overall"] == true);
  CHECK(rep["connections"].size() == 6);
  CHECK(rep["jacobian_fd"]["max_scaled_error"].get<double>() < 1e-6);
  CHECK(rep["jacobian_fd"]["seed"] == 1);
  RunResult r2 = run_cli("verify --n 3 --out " + (d / "b").string(), d);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(d / "a" / "verify_n3.json") == slurp(d / "b" / "verify_n3.json"));
}

TEST_CASE("a miscalibrated rate constant is reported, not hidden") {
  fs::path d = scratch_dir("miscal");
  // with the rate constant forced to 1.0 several trajectories stall; a short
  // horizon keeps the run quick and the verdict is still a clean failure
  RunResult r =
      run_cli("verify --n 6 --epsilon 1.0 --t-max 2 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("t-max-reached") != std::string::npos);
  nlohmann::json rep = nlohmann::json::parse(slurp(d / "o" / "verify_n6.json"));
  CHECK(rep["overall"] == false);
  CHECK(!rep["causes"].empty());
}

TEST_CASE("stability reports cycles for small networks and none for large ones") {
  fs::path d = scratch_dir("stab");
  RunResult r = run_cli("stability --n 3 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 0);
  nlohmann::json j3 = nlohmann::json::parse(slurp(d / "o" / "stability_n3.json"));
  REQUIRE(j3["cycles"].size() == 3);
  for (const auto& c : j3["cycles"]) CHECK(c["verdict"] == "completely-unstable");
  r = run_cli("stability --n 6 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 0);
  nlohmann::json j6 = nlohmann::json::parse(slurp(d / "o" / "stability_n6.json"));
  CHECK(j6["cycles"].empty());
}

TEST_CASE("plot writes CSV and SVG for one plane or all planes") {
  fs::path d = scratch_dir("plot");
  RunResult r = run_cli("plot --n 4 --plane 1 --out " + (d / "one").string(), d);
  CHECK(r.exit_code == 0);
  std::string csv = slurp(d / "one" / "nullclines_n4_plane1.csv");
  CHECK(csv.rfind("plane,curve-id,which,x,y\n", 0) == 0);
  std::string svg = slurp(d / "one" / "nullclines_n4_plane1.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(!fs::exists(d / "one" / "nullclines_n4_plane2.csv"));
  r = run_cli("plot --n 4 --out " + (d / "all").string(), d);
  CHECK(r.exit_code == 0);
  for (int j = 1; j <= 4; ++j) {
    CHECK(fs::exists(d / "all" / ("nullclines_n4_plane" + std::to_string(j) + ".csv")));
    CHECK(fs::exists(d / "all" / ("nullclines_n4_plane" + std::to_string(j) + ".svg")));
  }
}

TEST_CASE("config file supplies defaults and flags override it") {
  fs::path d = scratch_dir("config");
  std::ofstream(d / "run.toml") << "n=4\n";
  RunResult r = run_cli("build --config " + (d / "run.toml").string() + " --out " +
                            (d / "a").string(),
                        d);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(d / "a" / "spec_n4.json"));
  r = run_cli("build --config " + (d / "run.toml").string() + " --n 5 --out " +
                  (d / "b").string(),
              d);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(d / "b" / "spec_n5.json"));
  CHECK(!fs::exists(d / "b" / "spec_n4.json"));
}

TEST_CASE("the all command produces every artifact plus a combined report") {
  fs::path d = scratch_dir("all3");
  RunResult r = run_cli("all --n 3 --out " + (d / "o").string(), d);
  CHECK(r.exit_code == 0);
  for (const char* f : {"spec_n3.json", "equations_n3.txt", "verify_n3.json",
                        "stability_n3.json", "report_n3.json", "nullclines_n3_plane1.csv",
                        "nullclines_n3_plane2.svg", "nullclines_n3_plane3.csv"})
    CHECK(fs::exists(d / "o" / f));
  nlohmann::json rep = nlohmann::json::parse(slurp(d / "o" / "report_n3.json"));
  CHECK(rep.contains("config"));
  CHECK(rep.contains("spec"));
  CHECK(rep.contains("verify"));
  CHECK(rep.contains("stability"));
  CHECK(rep["verify"]["overall"] == true);
}

}  // TEST_SUITE
