#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "graphsmooth/csv.hpp"
#include "graphsmooth/manifest.hpp"

using namespace graphsmooth;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("graphsmooth_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const Scratch& scratch, const std::string& args) {
  static int counter = 0;
  const fs::path capture =
      scratch.dir / ("capture_" + std::to_string(counter++) + ".log");
  const std::string command = std::string(GRAPHSMOOTH_CLI_PATH) + " " + args +
                              " > " + capture.string() + " 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = slurp(capture);
  return result;
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("no arguments prints usage and exits 1") {
  Scratch scratch;
  const RunResult result = run_cli(scratch, "");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("reg-sweep") != std::string::npos);
  CHECK(result.output.find("selftest") != std::string::npos);
}

TEST_CASE("unknown subcommands and flags exit 1 with a parse message") {
  Scratch scratch;
  const RunResult bad_sub = run_cli(scratch, "frobnicate");
  CHECK(bad_sub.exit_code == 1);
  CHECK(bad_sub.output.find("error") != std::string::npos);

  const RunResult bad_flag = run_cli(scratch, "selftest --frob 1");
  CHECK(bad_flag.exit_code == 1);
}

TEST_CASE("--help exits 0") {
  Scratch scratch;
  CHECK(run_cli(scratch, "--help").exit_code == 0);
  CHECK(run_cli(scratch, "reg-sweep --help").exit_code == 0);
}

TEST_CASE("selftest passes end to end") {
  Scratch scratch;
  const RunResult result = run_cli(scratch, "selftest");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("[ ok ]") != std::string::npos);
  CHECK(result.output.find("[FAIL]") == std::string::npos);
}

TEST_CASE("reg-sweep writes reproducible artifacts controlled by the seed") {
  Scratch scratch;
  const fs::path out_a = scratch.dir / "a";
  const fs::path out_b = scratch.dir / "b";
  const fs::path out_c = scratch.dir / "c";
  const std::string base =
      "reg-sweep --n 40 --n-train 20 --trials 2 --kmax 3 --jobs 2 --out ";

  const RunResult first = run_cli(scratch, base + out_a.string());
  CHECK(first.exit_code == 0);
  CHECK(fs::exists(out_a / "risk_curve.csv"));
  CHECK(fs::exists(out_a / "manifest.txt"));
  CHECK(first.output.find("k*") != std::string::npos);

  // Same invocation, different directory: byte-identical data.
  CHECK(run_cli(scratch, base + out_b.string()).exit_code == 0);
  CHECK(slurp(out_a / "risk_curve.csv") == slurp(out_b / "risk_curve.csv"));

  // A different seed must change the numbers.
  CHECK(run_cli(scratch, base + out_c.string() + " --seed 777").exit_code == 0);
  CHECK(slurp(out_a / "risk_curve.csv") != slurp(out_c / "risk_curve.csv"));

  // The manifest records the effective parameters.
  const Manifest manifest = Manifest::read(out_a / "manifest.txt");
  CHECK(manifest.get("task") == "regression");
  CHECK(manifest.get_int("n") == 40);
  CHECK(manifest.get_int("trials") == 2);
  CHECK(manifest.get("command") == "reg-sweep");

  // The curve file parses and has the requested grid.
  const RiskCurve curve = read_risk_curve_csv(out_a / "risk_curve.csv");
  CHECK(curve.ks == std::vector<int>{0, 1, 2, 3});
  CHECK(curve.n_trials == 2);
  CHECK_FALSE(curve.theory.empty());
}

TEST_CASE("invalid penalties are rejected up front") {
  Scratch scratch;
  const RunResult result = run_cli(
      scratch, "reg-sweep --lam -1 --out " + (scratch.dir / "x").string());
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("lambda") != std::string::npos);
}

TEST_CASE("config files feed the sweep and flags override them") {
  Scratch scratch;
  const fs::path cfg = scratch.dir / "sweep.cfg";
  spit(cfg,
       "task = regression\n"
       "lambda = 0.3\n"
       "n = 40\n"
       "n_train = 20\n"
       "trials = 2\n"
       "k_max = 2\n");
  const fs::path out = scratch.dir / "cfg_out";
  const RunResult result =
      run_cli(scratch, "reg-sweep --config " + cfg.string() + " --lam 0.5 --out " +
                           out.string());
  CHECK(result.exit_code == 0);

  const Manifest manifest = Manifest::read(out / "manifest.txt");
  CHECK(manifest.get_double("lambda") == 0.5);  // flag wins
  CHECK(manifest.get_int("n") == 40);           // config wins over default
  CHECK(manifest.get_int("trials") == 2);

  // Unknown keys are configuration typos, not extensions: refuse loudly.
  spit(cfg, "task = regression\nbogus = 1\n");
  const RunResult typo = run_cli(
      scratch, "reg-sweep --config " + cfg.string() + " --out " + out.string());
  CHECK(typo.exit_code == 1);
  CHECK(typo.output.find("bogus") != std::string::npos);
}

TEST_CASE("cls-sweep records a pinned error constant") {
  Scratch scratch;
  const fs::path out = scratch.dir / "cls";
  const RunResult result = run_cli(
      scratch,
      "cls-sweep --n 40 --n-train 20 --trials 2 --kmax 2 --error-constant 0.1 "
      "--out " + out.string());
  CHECK(result.exit_code == 0);
  const Manifest manifest = Manifest::read(out / "manifest.txt");
  CHECK(manifest.get("task") == "classification");
  CHECK(manifest.get_double("error_constant") == 0.1);

  // Without the flag the manifest records the fitting policy itself, so a
  // rerun from the manifest fits the constant again instead of pinning a
  // stale value.
  const fs::path fitted = scratch.dir / "cls_fit";
  CHECK(run_cli(scratch,
                "cls-sweep --n 40 --n-train 20 --trials 2 --kmax 2 --out " +
                    fitted.string())
            .exit_code == 0);
  CHECK(Manifest::read(fitted / "manifest.txt").get("error_constant") == "fit");
}

TEST_CASE("theory-curve reproduces the frozen closed-form value at k = 0") {
  Scratch scratch;
  const fs::path out = scratch.dir / "theory";
  const RunResult result =
      run_cli(scratch, "theory-curve --kmax 10 --out " + out.string());
  CHECK(result.exit_code == 0);

  const std::string text = slurp(out / "theory_curve.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);  // header + 11 rows
  std::istringstream lines(text);
  std::string header, first_row;
  std::getline(lines, header);
  std::getline(lines, first_row);
  const double at_zero = std::strtod(first_row.c_str() + 2, nullptr);
  CHECK(at_zero == doctest::Approx(2.98 / 7.29).epsilon(1e-12));

  const RunResult cls = run_cli(
      scratch, "theory-curve --family cls --kmax 8 --c 0.05 --out " +
                   (scratch.dir / "theory_cls").string());
  CHECK(cls.exit_code == 0);
}

TEST_CASE("oversmooth-check verifies the collapse constant on a small graph") {
  Scratch scratch;
  const fs::path out = scratch.dir / "over";
  const RunResult result = run_cli(
      scratch,
      "oversmooth-check --n 80 --n-train 40 --k 800 --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(out / "oversmooth_check.csv"));
  CHECK(fs::exists(out / "manifest.txt"));
  CHECK(result.output.find("max |pred - c|") != std::string::npos);
  CHECK(result.output.find("PASSED") != std::string::npos);

  // The graph dump is opt-in.
  CHECK_FALSE(fs::exists(out / "adjacency.csv"));
  const fs::path dumped = scratch.dir / "over_dump";
  CHECK(run_cli(scratch,
                "oversmooth-check --n 40 --n-train 20 --k 400 --dump-graph "
                "--out " + dumped.string())
            .exit_code == 0);
  CHECK(fs::exists(dumped / "adjacency.csv"));
  CHECK(fs::exists(dumped / "operator.csv"));
}

TEST_CASE("lemma-check passes with a moderate sample budget") {
  Scratch scratch;
  const fs::path out = scratch.dir / "lemma";
  // The decay slope needs the full 16x span of sample sizes; a narrower
  // grid leaves the sup-statistic slope outside the pinned band.
  const RunResult result = run_cli(
      scratch,
      "lemma-check --tuples 5 --samples 300000 --ns 250,500,1000,2000,4000 "
      "--out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(out / "moment_check.csv"));
  CHECK(fs::exists(out / "phi_regression.csv"));
  CHECK(fs::exists(out / "phi_classification.csv"));
  CHECK(result.output.find("slope") != std::string::npos);
}

TEST_CASE("dataset-sweep runs on a small fixture") {
  Scratch scratch;
  const fs::path edges = scratch.dir / "edges.csv";
  const fs::path features = scratch.dir / "features.csv";
  const fs::path labels = scratch.dir / "labels.csv";
  spit(edges, "0,1\n1,2\n2,3\n3,4\n4,5\n5,0\n");
  spit(features, "1,0\n0,1\n1,1\n0,0\n1,0.5\n0.5,1\n");
  spit(labels, "1\n-1\n1\n-1\n1\n-1\n");

  const fs::path out = scratch.dir / "data_out";
  const RunResult result = run_cli(
      scratch, "dataset-sweep --edges " + edges.string() + " --features " +
                   features.string() + " --labels " + labels.string() +
                   " --kmax 2 --eps 0.1 --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(out / "risk_curve.csv"));
  const RiskCurve curve = read_risk_curve_csv(out / "risk_curve.csv");
  CHECK(curve.ks == std::vector<int>{0, 1, 2});
  CHECK(curve.theory.empty());

  // Required flags really are required.
  const RunResult missing =
      run_cli(scratch, "dataset-sweep --edges " + edges.string());
  CHECK(missing.exit_code == 1);
}
