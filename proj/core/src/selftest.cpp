#include "graphsmooth/selftest.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "graphsmooth/csv.hpp"
#include "graphsmooth/errors.hpp"
#include "graphsmooth/experiments.hpp"
#include "graphsmooth/graph.hpp"
#include "graphsmooth/learn.hpp"
#include "graphsmooth/manifest.hpp"
#include "graphsmooth/rng.hpp"

namespace graphsmooth {
namespace {

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void add_check(SelftestReport* report, const std::string& name, bool passed,
               const std::string& detail) {
  report->checks.push_back({name, passed, detail});
}

}  // namespace

bool SelftestReport::all_passed() const {
  for (const Check& check : checks) {
    if (!check.passed) {
      return false;
    }
  }
  return true;
}

SelftestReport run_selftest(std::uint64_t seed,
                            const std::filesystem::path& scratch_dir) {
  SelftestReport report;

  // Shared small instance: the stock regression design with a floor so the
  // graph is strictly positive everywhere.
  const RegressionModelConfig config = default_regression_config();
  KernelConfig kernel;
  kernel.epsilon = 0.1;
  const Eigen::Index n = 120;
  const LatentDataset dataset = sample_regression(config, n, n / 2, seed);
  const Adjacency adjacency = build_adjacency(dataset.latents, kernel);
  const SmoothingOperator op = row_normalize(adjacency);

  {
    const double row_dev =
        (op.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
    const double drift =
        (smooth(op, ones, 1000).array() - 1.0).abs().maxCoeff();
    std::ostringstream detail;
    detail << "max row-sum deviation " << row_dev << ", after 1000 steps "
           << drift;
    add_check(&report, "rows stay stochastic", row_dev <= 1e-10 && drift <= 1e-8,
              detail.str());
  }

  {
    const Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(n, 1, 0.7);
    double worst = 0.0;
    for (int k : {1, 10, 100}) {
      worst = std::max(worst,
                       (smooth(op, constant, k).array() - 0.7).abs().maxCoeff());
    }
    std::ostringstream detail;
    detail << "max deviation " << worst;
    add_check(&report, "constant features are fixed points", worst <= 1e-10,
              detail.str());
  }

  {
    const bool identical = smooth(op, dataset.features, 0) == dataset.features;
    add_check(&report, "order-0 smoothing is the identity", identical,
              identical ? "bitwise equal" : "output differs from input");
  }

  {
    // Reversing the point order must permute the adjacency accordingly.
    Eigen::MatrixXd reversed = dataset.latents.colwise().reverse();
    const Adjacency permuted = build_adjacency(reversed, kernel);
    const bool equal =
        permuted.weights == adjacency.weights.reverse().eval();
    add_check(&report, "graph builder is permutation-equivariant", equal,
              equal ? "bitwise equal under row reversal"
                    : "permuted adjacency differs");
  }

  {
    const RiskCurve curve = k_sweep(dataset, op, 0.1, {0, 1, 2});
    const RidgeModel direct =
        ridge_fit(dataset.train_features(), dataset.train_labels(), 0.1);
    const double direct_risk =
        test_risk(dataset.test_features(), dataset.test_labels(), direct);
    const bool equal = curve.empirical_mean.front() == direct_risk;
    std::ostringstream detail;
    detail << "sweep " << format_g17(curve.empirical_mean.front())
           << " vs direct " << format_g17(direct_risk);
    add_check(&report, "sweep order 0 equals a direct fit", equal, detail.str());
  }

  {
    std::filesystem::path scratch = scratch_dir;
    bool throwaway = false;
    if (scratch.empty()) {
      scratch = std::filesystem::temp_directory_path() /
                ("graphsmooth-selftest-" +
                 std::to_string(std::random_device{}()));
      throwaway = true;
    }
    std::filesystem::create_directories(scratch / "first");
    std::filesystem::create_directories(scratch / "second");

    SweepSpec spec = default_regression_sweep();
    spec.n = 120;
    spec.n_train = 60;
    spec.n_trials = 2;
    spec.ks = {0, 1, 2, 3};
    spec.base_seed = seed + 1;

    const MonteCarloResult first = monte_carlo(spec);
    write_risk_curve_csv(first.curve, scratch / "first" / "risk_curve.csv");
    manifest_for_sweep(spec).write(scratch / "first" / "manifest.txt");

    const SweepSpec rebuilt =
        sweep_from_manifest(Manifest::read(scratch / "first" / "manifest.txt"));
    const MonteCarloResult second = monte_carlo(rebuilt);
    write_risk_curve_csv(second.curve, scratch / "second" / "risk_curve.csv");
    manifest_for_sweep(rebuilt).write(scratch / "second" / "manifest.txt");

    const bool curves_equal =
        read_bytes(scratch / "first" / "risk_curve.csv") ==
        read_bytes(scratch / "second" / "risk_curve.csv");
    const bool manifests_equal =
        read_bytes(scratch / "first" / "manifest.txt") ==
        read_bytes(scratch / "second" / "manifest.txt");
    add_check(&report, "manifest rerun is byte-identical",
              curves_equal && manifests_equal,
              curves_equal && manifests_equal
                  ? "curve and manifest bytes match"
                  : "rerun produced different bytes");
    if (throwaway) {
      std::error_code ec;
      std::filesystem::remove_all(scratch, ec);
    }
  }

  return report;
}

}  // namespace graphsmooth
