// Command-line front end for the graph-smoothing laboratory.
//
// Subcommands:
//   reg-sweep        Monte-Carlo risk-vs-k sweep, regression design
//   cls-sweep        Monte-Carlo risk-vs-k sweep, two-class design
//   oversmooth-check Verify that heavy smoothing collapses predictions to the
//                    closed-form constant and that L^k reaches its ergodic limit
//   lemma-check      Cross-check kernel moments against Monte-Carlo references
//                    and measure the one-step aggregation error decay
//   theory-curve     Evaluate the closed-form risk curves without sampling
//   dataset-sweep    Risk-vs-k sweep on an external graph (edges/features/labels)
//   selftest         Run the built-in invariant checks
//
// Exit codes: 0 success / checks passed, 1 invalid input or a failed check,
// 2 internal numerical failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphsmooth/config.hpp"
#include "graphsmooth/csv.hpp"
#include "graphsmooth/errors.hpp"
#include "graphsmooth/experiments.hpp"
#include "graphsmooth/graph.hpp"
#include "graphsmooth/ingest.hpp"
#include "graphsmooth/learn.hpp"
#include "graphsmooth/manifest.hpp"
#include "graphsmooth/selftest.hpp"
#include "graphsmooth/theory.hpp"
#include "graphsmooth/version.hpp"

namespace {

using namespace graphsmooth;

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out + "': " + ec.message());
  }
  return dir;
}

std::vector<int> contiguous_ks(int k_max) {
  if (k_max < 0) {
    throw Error("k_max must be >= 0");
  }
  std::vector<int> ks(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    ks[static_cast<std::size_t>(k)] = k;
  }
  return ks;
}

// Accepts "0,1,2" or "[0,1,2]"; entries must be integral.
std::vector<int> parse_int_list_text(const std::string& text,
                                     const std::string& what) {
  std::string wrapped = text;
  if (wrapped.find('[') == std::string::npos) {
    wrapped = "[" + wrapped + "]";
  }
  const Eigen::VectorXd values = parse_vector(wrapped);
  std::vector<int> out(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double rounded = std::nearbyint(values(i));
    if (std::abs(values(i) - rounded) > 1e-9) {
      throw Error(what + " entries must be integers, got " +
                  format_g17(values(i)));
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(rounded);
  }
  return out;
}

void require_validated(const ValidationReport& report, const std::string& what) {
  if (!report.passed()) {
    throw ConfigMismatchError(what + " is invalid:\n" + report.to_string());
  }
}

// ---------------------------------------------------------------------------
// reg-sweep / cls-sweep

struct SweepArgs {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = kDefaultSeed;
  int trials = 0;
  long long n = 0;
  long long n_train = 0;
  double lambda = 0.0;
  double epsilon = 0.0;
  int k_max = -1;
  int jobs = -1;
  std::string error_constant;  // classification only: "fit" or a number
};

void add_sweep_flags(CLI::App* sub, SweepArgs& a, bool classification) {
  sub->add_option("--config", a.config,
                  "key = value file with model/sweep settings");
  sub->add_option("--out", a.out, "output directory")->capture_default_str();
  sub->add_option("--seed", a.seed, "base seed; trial t uses seed + t");
  sub->add_option("--trials", a.trials, "number of Monte-Carlo trials");
  sub->add_option("--n", a.n, "points per trial");
  sub->add_option("--n-train", a.n_train, "training points per trial");
  sub->add_option("--lam", a.lambda, "ridge penalty (> 0)");
  sub->add_option("--eps", a.epsilon, "uniform affinity floor (>= 0)");
  sub->add_option("--kmax", a.k_max, "sweep smoothing orders 0..kmax");
  sub->add_option("--jobs", a.jobs, "worker threads (0 = automatic)");
  if (classification) {
    sub->add_option("--error-constant", a.error_constant,
                    "error-term coefficient for the theory curve: a number, "
                    "or 'fit' to calibrate on k = 1, 2");
  }
}

const std::set<std::string>& known_sweep_keys() {
  static const std::set<std::string> keys = {
      "task",   "lambda", "epsilon",   "n",  "n_train",    "trials",
      "k_max",  "ks",     "seed",      "jobs", "d",        "p",
      "sigma",  "beta_star", "projection", "mu", "mu_norm",
      "error_constant"};
  return keys;
}

void reject_unknown_keys(const KeyValueFile& file) {
  std::vector<std::string> unknown;
  for (const auto& [key, value] : file.entries()) {
    (void)value;
    if (known_sweep_keys().count(key) == 0) {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string joined;
    for (const auto& key : unknown) {
      joined += (joined.empty() ? "" : ", ") + key;
    }
    throw ConfigMismatchError("unknown config keys: " + joined);
  }
}

Eigen::MatrixXd selector_projection(int d, int p) {
  Eigen::MatrixXd projection = Eigen::MatrixXd::Zero(d, p);
  projection.topLeftCorner(p, p).setIdentity();
  return projection;
}

RegressionModelConfig regression_from_file(const KeyValueFile& file) {
  RegressionModelConfig config = default_regression_config();
  const int d = file.has("d") ? static_cast<int>(file.get_int("d"))
                              : config.latent_dim;
  const int p = file.has("p") ? static_cast<int>(file.get_int("p"))
                              : config.feature_dim;
  const bool stock_dims =
      d == config.latent_dim && p == config.feature_dim;
  if (!stock_dims) {
    if (!file.has("sigma") || !file.has("beta_star")) {
      throw ConfigMismatchError(
          "a config with custom d/p must also provide sigma and beta_star");
    }
    config.projection = selector_projection(d, p);
  }
  config.latent_dim = d;
  config.feature_dim = p;
  if (file.has("sigma")) {
    config.covariance = parse_matrix(file.get("sigma"), d, d);
  }
  if (file.has("beta_star")) {
    config.coefficients = parse_vector(file.get("beta_star"), d);
  }
  if (file.has("projection")) {
    config.projection = parse_matrix(file.get("projection"), d, p);
  }
  return config;
}

ClassificationModelConfig classification_from_file(const KeyValueFile& file) {
  ClassificationModelConfig config = default_classification_config();
  const int d = file.has("d") ? static_cast<int>(file.get_int("d"))
                              : config.latent_dim;
  const int p = file.has("p") ? static_cast<int>(file.get_int("p"))
                              : config.feature_dim;
  const bool stock_dims =
      d == config.latent_dim && p == config.feature_dim;
  if (!stock_dims) {
    if (!file.has("mu") && !file.has("mu_norm")) {
      throw ConfigMismatchError(
          "a config with custom d/p must also provide mu or mu_norm");
    }
    config.projection = selector_projection(d, p);
  }
  config.latent_dim = d;
  config.feature_dim = p;
  if (file.has("mu")) {
    config.class_mean = parse_vector(file.get("mu"), d);
  } else if (file.has("mu_norm")) {
    // Length-preserving diagonal placement: norm * (1,...,1)/sqrt(d).
    const double norm = file.get_double("mu_norm");
    config.class_mean =
        Eigen::VectorXd::Constant(d, norm / std::sqrt(static_cast<double>(d)));
  }
  if (file.has("projection")) {
    config.projection = parse_matrix(file.get("projection"), d, p);
  }
  return config;
}

std::optional<double> parse_error_constant(const std::string& text) {
  if (text == "fit") {
    return std::nullopt;
  }
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument(text);
    }
    return value;
  } catch (const std::exception&) {
    throw ConfigMismatchError("error_constant must be a number or 'fit', got '" +
                              text + "'");
  }
}

SweepSpec assemble_sweep(bool regression, const CLI::App& sub,
                         const SweepArgs& a) {
  SweepSpec spec =
      regression ? default_regression_sweep() : default_classification_sweep();
  if (!a.config.empty()) {
    const KeyValueFile file = KeyValueFile::parse(a.config);
    reject_unknown_keys(file);
    if (file.has("task")) {
      const std::string task = file.get("task");
      const std::string expected = regression ? "regression" : "classification";
      if (task != expected) {
        throw ConfigMismatchError("config declares task '" + task +
                                  "' but the subcommand runs " + expected);
      }
    }
    if (regression) {
      spec.model = regression_from_file(file);
      if (file.has("mu") || file.has("mu_norm") || file.has("error_constant")) {
        throw ConfigMismatchError(
            "mu/mu_norm/error_constant only apply to classification configs");
      }
    } else {
      spec.model = classification_from_file(file);
      if (file.has("sigma") || file.has("beta_star")) {
        throw ConfigMismatchError(
            "sigma/beta_star only apply to regression configs");
      }
      if (file.has("error_constant")) {
        spec.error_constant = parse_error_constant(file.get("error_constant"));
      }
    }
    if (file.has("lambda")) spec.lambda = file.get_double("lambda");
    if (file.has("epsilon")) spec.kernel.epsilon = file.get_double("epsilon");
    if (file.has("n")) spec.n = file.get_int("n");
    if (file.has("n_train")) spec.n_train = file.get_int("n_train");
    if (file.has("trials")) spec.n_trials = static_cast<int>(file.get_int("trials"));
    if (file.has("seed")) spec.base_seed = file.get_uint("seed");
    if (file.has("jobs")) spec.jobs = static_cast<int>(file.get_int("jobs"));
    if (file.has("ks") && file.has("k_max")) {
      throw ConfigMismatchError("provide either ks or k_max, not both");
    }
    if (file.has("ks")) {
      spec.ks = parse_int_list_text(file.get("ks"), "ks");
    } else if (file.has("k_max")) {
      spec.ks = contiguous_ks(static_cast<int>(file.get_int("k_max")));
    }
  }
  if (sub.count("--seed") > 0) spec.base_seed = a.seed;
  if (sub.count("--trials") > 0) spec.n_trials = a.trials;
  if (sub.count("--n") > 0) spec.n = a.n;
  if (sub.count("--n-train") > 0) spec.n_train = a.n_train;
  if (sub.count("--lam") > 0) spec.lambda = a.lambda;
  if (sub.count("--eps") > 0) spec.kernel.epsilon = a.epsilon;
  if (sub.count("--kmax") > 0) spec.ks = contiguous_ks(a.k_max);
  if (sub.count("--jobs") > 0) spec.jobs = a.jobs;
  if (!regression && sub.count("--error-constant") > 0) {
    spec.error_constant = parse_error_constant(a.error_constant);
  }
  return spec;
}

// Largest relative gap between the empirical means and the attached theory
// curve over orders k <= k_cap; negative when no theory is attached.
double max_theory_gap(const RiskCurve& curve, int k_cap) {
  if (curve.theory.empty()) {
    return -1.0;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    if (curve.ks[i] > k_cap) {
      continue;
    }
    const double denom = std::max(std::abs(curve.theory[i]), 1e-12);
    worst = std::max(worst, std::abs(curve.empirical_mean[i] - curve.theory[i]) / denom);
  }
  return worst;
}

int run_sweep(bool regression, const CLI::App& sub, const SweepArgs& a) {
  const SweepSpec spec = assemble_sweep(regression, sub, a);
  const MonteCarloResult result = monte_carlo(spec);
  const std::filesystem::path dir = ensure_out_dir(a.out);

  write_risk_curve_csv(result.curve, dir / "risk_curve.csv");
  Manifest manifest = manifest_for_sweep(spec);
  manifest.set("command", regression ? "reg-sweep" : "cls-sweep");
  manifest.set("curve_file", "risk_curve.csv");
  manifest.write(dir / "manifest.txt");

  const RiskCurve& curve = result.curve;
  const std::size_t k_star_index = [&] {
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
      if (curve.ks[i] == curve.k_star_empirical) return i;
    }
    return std::size_t{0};
  }();

  std::cout << (regression ? "reg-sweep" : "cls-sweep") << ": n=" << spec.n
            << " n_train=" << spec.n_train << " trials=" << spec.n_trials
            << " lambda=" << spec.lambda << " eps=" << spec.kernel.epsilon
            << "\n";
  if (!result.failures.empty()) {
    std::cout << "  warning: " << result.failures.size()
              << " trial(s) failed; statistics use the rest\n";
  }
  std::cout << "  risk at k=0     " << format_g17(curve.empirical_mean.front())
            << "\n";
  std::cout << "  best order k*   " << curve.k_star_empirical << " (mean risk "
            << format_g17(curve.empirical_mean[k_star_index]) << ", std "
            << format_g17(curve.empirical_std[k_star_index]) << ")\n";
  std::cout << "  oversmoothing   " << format_g17(curve.oversmoothing_level)
            << " (risk of the fully collapsed rank-one fit)\n";
  std::cout << "  interior k*     " << result.interior_fraction * 100.0
            << "% of trials\n";
  const double gap = max_theory_gap(curve, 5);
  if (gap >= 0.0) {
    std::cout << "  theory curve    attached (max rel gap " << gap * 100.0
              << "% on k <= 5)\n";
  } else {
    std::cout << "  theory curve    not available for this configuration\n";
  }
  std::cout << "  wrote " << (dir / "risk_curve.csv").string() << "\n";
  std::cout << "  wrote " << (dir / "manifest.txt").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// oversmooth-check

struct OversmoothArgs {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = kDefaultSeed;
  long long n = 300;
  long long n_train = 150;
  double lambda = 0.1;
  double epsilon = 0.1;
  int k = 2000;
  double tol_pred = 1e-6;
  double tol_ergodic = 1e-8;
  bool dump_graph = false;
};

int run_oversmooth(const OversmoothArgs& a) {
  RegressionModelConfig config = default_regression_config();
  if (!a.config.empty()) {
    const KeyValueFile file = KeyValueFile::parse(a.config);
    reject_unknown_keys(file);
    config = regression_from_file(file);
  }
  require_validated(validate(config), "model config");
  if (a.epsilon < 0.0) {
    throw Error("eps must be >= 0");
  }
  if (a.k < 1) {
    throw Error("k must be >= 1");
  }

  const LatentDataset dataset =
      sample_regression(config, a.n, a.n_train, a.seed);
  const KernelConfig kernel{a.epsilon, std::nullopt};
  const Adjacency adjacency = build_adjacency(dataset.latents, kernel);
  const SmoothingOperator op = row_normalize(adjacency);

  const OversmoothingLimit limit = oversmoothing_prediction(dataset, op, a.lambda);
  const Eigen::MatrixXd heavily_smoothed = smooth(op, dataset.features, a.k);
  const RidgeModel model =
      ridge_fit(heavily_smoothed.topRows(dataset.n_train),
                dataset.train_labels(), a.lambda, a.k);
  const Eigen::VectorXd predictions =
      heavily_smoothed.bottomRows(dataset.n_test) * model.coefficients;
  const double max_deviation =
      (predictions.array() - limit.constant_label).abs().maxCoeff();
  const double risk_at_k =
      test_risk(heavily_smoothed.bottomRows(dataset.n_test),
                dataset.test_labels(), model);
  const ConvergenceCheck ergodic = ergodic_convergence(op, a.k, a.tol_ergodic);

  const std::filesystem::path dir = ensure_out_dir(a.out);
  {
    std::ofstream out(dir / "oversmooth_check.csv");
    if (!out) {
      throw IoError("cannot write " + (dir / "oversmooth_check.csv").string());
    }
    out << "metric,value\n";
    out << "k," << a.k << "\n";
    out << "constant_label," << format_g17(limit.constant_label) << "\n";
    out << "limit_risk," << format_g17(limit.limit_risk) << "\n";
    out << "risk_at_k," << format_g17(risk_at_k) << "\n";
    out << "max_pred_deviation," << format_g17(max_deviation) << "\n";
    out << "ergodic_distance," << format_g17(ergodic.distance) << "\n";
  }
  if (a.dump_graph) {
    write_matrix_csv(adjacency.weights, dir / "adjacency.csv");
    write_matrix_csv(op.matrix, dir / "operator.csv");
  }
  Manifest manifest;
  manifest.set("command", "oversmooth-check");
  manifest.set("version", kVersion);
  manifest.set("task", "regression");
  manifest.set("n", static_cast<std::int64_t>(a.n));
  manifest.set("n_train", static_cast<std::int64_t>(a.n_train));
  manifest.set("lambda", a.lambda);
  manifest.set("epsilon", a.epsilon);
  manifest.set("k", a.k);
  manifest.set("seed", a.seed);
  manifest.set("tol_pred", a.tol_pred);
  manifest.set("tol_ergodic", a.tol_ergodic);
  manifest.set("d", config.latent_dim);
  manifest.set("p", config.feature_dim);
  manifest.set("sigma", format_matrix(config.covariance));
  manifest.set("beta_star", format_vector(config.coefficients));
  manifest.set("projection", format_matrix(config.projection));
  manifest.write(dir / "manifest.txt");

  const bool pred_ok = max_deviation <= a.tol_pred;
  std::cout << "oversmooth-check: n=" << a.n << " eps=" << a.epsilon
            << " k=" << a.k << "\n";
  std::cout << "  constant label   " << format_g17(limit.constant_label) << "\n";
  std::cout << "  limit risk       " << format_g17(limit.limit_risk)
            << "  (risk at k: " << format_g17(risk_at_k) << ")\n";
  std::cout << "  max |pred - c|   " << format_g17(max_deviation) << "  ("
            << (pred_ok ? "<=" : ">") << " tol " << a.tol_pred << ")\n";
  std::cout << "  ergodic distance " << format_g17(ergodic.distance) << "  ("
            << (ergodic.converged ? "converged" : "NOT CONVERGED") << " at tol "
            << a.tol_ergodic << ")\n";
  std::cout << "  wrote " << (dir / "oversmooth_check.csv").string() << "\n";
  if (!pred_ok || !ergodic.converged) {
    std::cout << "  FAILED\n";
    return 1;
  }
  std::cout << "  PASSED\n";
  return 0;
}

// ---------------------------------------------------------------------------
// lemma-check

struct LemmaArgs {
  std::string out = "out";
  std::uint64_t seed = kDefaultSeed;
  int dims = 3;
  int tuples = 20;
  long long samples = 1000000;
  double epsilon = 0.1;
  std::string ns_text = "250,500,1000,2000,4000";
};

int run_lemma(const LemmaArgs& a) {
  if (a.dims < 1 || a.tuples < 1 || a.samples < 1) {
    throw Error("dims, tuples and samples must all be >= 1");
  }
  if (a.epsilon <= 0.0) {
    throw Error("eps must be > 0 for the aggregation-error diagnostic");
  }
  const std::vector<int> ns_int = parse_int_list_text(a.ns_text, "ns");
  std::vector<Eigen::Index> ns(ns_int.begin(), ns_int.end());

  const std::filesystem::path dir = ensure_out_dir(a.out);

  // Part 1: closed-form kernel moments vs Monte-Carlo references.
  double worst_mass_gap = 0.0;
  double worst_first_gap = 0.0;
  bool moments_ok = true;
  {
    std::ofstream out(dir / "moment_check.csv");
    if (!out) {
      throw IoError("cannot write " + (dir / "moment_check.csv").string());
    }
    out << "case,mass_closed,mass_mc,mass_gap,first_moment_gap\n";
    for (int t = 0; t < a.tuples; ++t) {
      const MomentCheckCase mc_case =
          random_moment_case(a.dims, a.seed + 1000 + static_cast<std::uint64_t>(t));
      const KernelMoments closed = kernel_gaussian_moments(
          mc_case.x, mc_case.mu, mc_case.sigma, mc_case.sigma_w);
      const KernelMoments sampled = mc_kernel_gaussian_moments(
          mc_case.x, mc_case.mu, mc_case.sigma, mc_case.sigma_w, a.samples,
          a.seed + 5000 + static_cast<std::uint64_t>(t));
      const double mass_gap = std::abs(closed.mass - sampled.mass);
      const double first_gap =
          (closed.first_moment - sampled.first_moment).norm();
      const bool mass_pass =
          mass_gap <= std::max(0.01 * std::abs(closed.mass), 1e-6);
      const bool first_pass =
          first_gap <= std::max(0.01 * closed.first_moment.norm(), 1e-6);
      moments_ok = moments_ok && mass_pass && first_pass;
      worst_mass_gap = std::max(
          worst_mass_gap, mass_gap / std::max(std::abs(closed.mass), 1e-6));
      worst_first_gap = std::max(
          worst_first_gap, first_gap / std::max(closed.first_moment.norm(), 1e-6));
      out << t << "," << format_g17(closed.mass) << ","
          << format_g17(sampled.mass) << "," << format_g17(mass_gap) << ","
          << format_g17(first_gap) << "\n";
    }
  }

  // Part 2: sup-gap between one empirical aggregation step and the population
  // smoothing map, as a function of n; the decay rate is the headline number.
  const KernelConfig kernel{a.epsilon, std::nullopt};
  const DiagnosticTable reg_table =
      smoothing_map_diagnostic(default_regression_config(), kernel, ns, a.seed + 11);
  const DiagnosticTable cls_table = smoothing_map_diagnostic(
      default_classification_config(), kernel, ns, a.seed + 12);
  write_diagnostic_csv(reg_table.rows, dir / "phi_regression.csv");
  write_diagnostic_csv(cls_table.rows, dir / "phi_classification.csv");

  Manifest manifest;
  manifest.set("command", "lemma-check");
  manifest.set("version", kVersion);
  manifest.set("dims", a.dims);
  manifest.set("tuples", a.tuples);
  manifest.set("samples", static_cast<std::int64_t>(a.samples));
  manifest.set("epsilon", a.epsilon);
  manifest.set("ns", a.ns_text);
  manifest.set("seed", a.seed);
  manifest.write(dir / "manifest.txt");

  const auto slope_ok = [](double slope) {
    return slope >= -0.8 && slope <= -0.3;
  };
  std::cout << "lemma-check: " << a.tuples << " moment cases in d=" << a.dims
            << ", " << a.samples << " MC draws each\n";
  std::cout << "  worst mass gap    " << worst_mass_gap * 100.0
            << "% (tolerance 1%)\n";
  std::cout << "  worst moment gap  " << worst_first_gap * 100.0
            << "% (tolerance 1%)\n";
  std::cout << "  regression decay      slope " << reg_table.loglog_slope
            << " (expected in [-0.8, -0.3])\n";
  std::cout << "  classification decay  slope " << cls_table.loglog_slope
            << " (expected in [-0.8, -0.3])\n";
  std::cout << "  wrote " << (dir / "moment_check.csv").string()
            << ", phi_regression.csv, phi_classification.csv\n";
  if (moments_ok && slope_ok(reg_table.loglog_slope) &&
      slope_ok(cls_table.loglog_slope)) {
    std::cout << "  PASSED\n";
    return 0;
  }
  std::cout << "  FAILED\n";
  return 1;
}

// ---------------------------------------------------------------------------
// theory-curve

struct TheoryArgs {
  std::string family = "reg-d2";
  std::string out = "out";
  double l1 = 2.0;
  double l2 = 0.5;
  double b = 1.0;
  double lambda = 0.1;
  double nu_norm = 2.8284271247461903;  // sqrt(8), the stock two-class design
  double mu_norm = 4.0;
  double c = 0.0;
  int k_max = 10;
};

int run_theory(const TheoryArgs& a) {
  std::vector<double> values;
  if (a.family == "reg-d2") {
    RegressionModelConfig config = default_regression_config();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd basis(2, 2);
    basis << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    Eigen::Vector2d eigs(a.l1, a.l2);
    config.covariance = basis * eigs.asDiagonal() * basis.transpose();
    config.coefficients = a.b * basis.col(0);
    values = regression_risk_curve_d2(config, a.lambda, a.k_max);
  } else if (a.family == "cls") {
    values = classification_risk_curve(a.nu_norm, a.mu_norm, a.lambda, a.c,
                                       a.k_max);
  } else {
    throw Error("unknown family '" + a.family + "' (use reg-d2 or cls)");
  }

  const std::filesystem::path dir = ensure_out_dir(a.out);
  {
    std::ofstream out(dir / "theory_curve.csv");
    if (!out) {
      throw IoError("cannot write " + (dir / "theory_curve.csv").string());
    }
    out << "k,risk\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
      out << k << "," << format_g17(values[k]) << "\n";
    }
  }
  Manifest manifest;
  manifest.set("command", "theory-curve");
  manifest.set("version", kVersion);
  manifest.set("family", a.family);
  manifest.set("lambda", a.lambda);
  manifest.set("k_max", a.k_max);
  if (a.family == "reg-d2") {
    manifest.set("l1", a.l1);
    manifest.set("l2", a.l2);
    manifest.set("b", a.b);
  } else {
    manifest.set("nu_norm", a.nu_norm);
    manifest.set("mu_norm", a.mu_norm);
    manifest.set("error_constant", a.c);
  }
  manifest.write(dir / "manifest.txt");

  std::cout << "theory-curve (" << a.family << "): k = 0.." << a.k_max << "\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::cout << "  k=" << k << "  " << format_g17(values[k]) << "\n";
  }
  std::cout << "  wrote " << (dir / "theory_curve.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// dataset-sweep

struct DatasetArgs {
  std::string edges;
  std::string features;
  std::string labels;
  std::string out = "out";
  std::string split_file;
  double train_fraction = 0.5;
  std::uint64_t split_seed = kDefaultSeed;
  double lambda = 0.1;
  double epsilon = 0.0;
  bool epsilon_all_pairs = false;
  bool reject_isolated = false;
  bool sum_duplicates = false;
  long long max_nodes = 20000;
  int k_max = 10;
};

int run_dataset(const DatasetArgs& a) {
  SplitSpec split;
  split.train_fraction = a.train_fraction;
  split.seed = a.split_seed;
  if (!a.split_file.empty()) {
    split.index_file = a.split_file;
  }
  LoadOptions load;
  load.sum_duplicates = a.sum_duplicates;
  load.max_nodes = a.max_nodes;

  const ExternalGraphDataset dataset =
      load_graph(a.edges, a.features, a.labels, split, load);

  SweepOptions options;
  options.epsilon = a.epsilon;
  options.epsilon_all_pairs = a.epsilon_all_pairs;
  options.isolated = a.reject_isolated
                         ? SweepOptions::IsolatedPolicy::kReject
                         : SweepOptions::IsolatedPolicy::kInjectSelfLoop;
  std::vector<std::string> warnings;
  const RiskCurve curve = dataset_sweep(dataset, a.lambda,
                                        contiguous_ks(a.k_max), options,
                                        &warnings);

  const std::filesystem::path dir = ensure_out_dir(a.out);
  write_risk_curve_csv(curve, dir / "risk_curve.csv");
  Manifest manifest;
  manifest.set("command", "dataset-sweep");
  manifest.set("version", kVersion);
  manifest.set("edges", a.edges);
  manifest.set("features", a.features);
  manifest.set("labels", a.labels);
  manifest.set("lambda", a.lambda);
  manifest.set("epsilon", a.epsilon);
  manifest.set("epsilon_all_pairs", a.epsilon_all_pairs);
  manifest.set("reject_isolated", a.reject_isolated);
  manifest.set("sum_duplicates", a.sum_duplicates);
  manifest.set("max_nodes", static_cast<std::int64_t>(a.max_nodes));
  manifest.set("k_max", a.k_max);
  manifest.set("train_fraction", a.train_fraction);
  if (a.split_file.empty()) {
    manifest.set("split_seed", a.split_seed);
  } else {
    manifest.set("split_file", a.split_file);
  }
  manifest.write(dir / "manifest.txt");

  const std::size_t k_star_index = [&] {
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
      if (curve.ks[i] == curve.k_star_empirical) return i;
    }
    return std::size_t{0};
  }();
  std::cout << "dataset-sweep: n=" << dataset.size() << " train="
            << dataset.train_ids.size() << " test=" << dataset.test_ids.size()
            << " lambda=" << a.lambda << "\n";
  for (const std::string& warning : warnings) {
    std::cout << "  warning: " << warning << "\n";
  }
  std::cout << "  risk at k=0     " << format_g17(curve.empirical_mean.front())
            << "\n";
  std::cout << "  best order k*   " << curve.k_star_empirical << " (risk "
            << format_g17(curve.empirical_mean[k_star_index]) << ")\n";
  std::cout << "  oversmoothing   " << format_g17(curve.oversmoothing_level)
            << "\n";
  std::cout << "  wrote " << (dir / "risk_curve.csv").string() << "\n";
  std::cout << "  wrote " << (dir / "manifest.txt").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest_cmd(std::uint64_t seed) {
  const SelftestReport report = run_selftest(seed);
  for (const auto& check : report.checks) {
    std::cout << (check.passed ? "[ ok ] " : "[FAIL] ") << check.name;
    if (!check.detail.empty()) {
      std::cout << " — " << check.detail;
    }
    std::cout << "\n";
  }
  if (report.all_passed()) {
    std::cout << "selftest: all " << report.checks.size() << " checks passed\n";
    return 0;
  }
  std::cout << "selftest: FAILED\n";
  return 1;
}

int classify_exit(const std::exception& error) {
  if (dynamic_cast<const SolveError*>(&error) != nullptr ||
      dynamic_cast<const EigenDecompositionError*>(&error) != nullptr) {
    return 2;
  }
  if (dynamic_cast<const Error*>(&error) != nullptr) {
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for mean-aggregation smoothing on latent-space "
      "random graphs"};
  app.set_version_flag("--version", std::string("graphsmooth ") + kVersion);
  app.require_subcommand(0, 1);

  SweepArgs reg_args;
  CLI::App* reg = app.add_subcommand(
      "reg-sweep", "Monte-Carlo risk-vs-k sweep for the regression design");
  add_sweep_flags(reg, reg_args, false);

  SweepArgs cls_args;
  CLI::App* cls = app.add_subcommand(
      "cls-sweep", "Monte-Carlo risk-vs-k sweep for the two-class design");
  add_sweep_flags(cls, cls_args, true);

  OversmoothArgs over_args;
  CLI::App* over = app.add_subcommand(
      "oversmooth-check",
      "Verify the closed-form collapse constant under heavy smoothing");
  over->add_option("--config", over_args.config, "model config file");
  over->add_option("--out", over_args.out, "output directory")->capture_default_str();
  over->add_option("--seed", over_args.seed, "dataset seed");
  over->add_option("--n", over_args.n, "points")->capture_default_str();
  over->add_option("--n-train", over_args.n_train, "training points")
      ->capture_default_str();
  over->add_option("--lam", over_args.lambda, "ridge penalty")->capture_default_str();
  over->add_option("--eps", over_args.epsilon, "affinity floor (keeps the graph connected)")
      ->capture_default_str();
  over->add_option("--k", over_args.k, "smoothing order to test")->capture_default_str();
  over->add_option("--tol-pred", over_args.tol_pred,
                   "max allowed |prediction - constant|")->capture_default_str();
  over->add_option("--tol-ergodic", over_args.tol_ergodic,
                   "max allowed spectral distance of L^k from its limit")
      ->capture_default_str();
  over->add_flag("--dump-graph", over_args.dump_graph,
                 "also write adjacency.csv and operator.csv");

  LemmaArgs lemma_args;
  CLI::App* lemma = app.add_subcommand(
      "lemma-check",
      "Cross-check kernel moments against Monte-Carlo and measure the "
      "aggregation-error decay");
  lemma->add_option("--out", lemma_args.out, "output directory")->capture_default_str();
  lemma->add_option("--seed", lemma_args.seed, "base seed");
  lemma->add_option("--dims", lemma_args.dims, "dimension of the moment cases")
      ->capture_default_str();
  lemma->add_option("--tuples", lemma_args.tuples, "number of random moment cases")
      ->capture_default_str();
  lemma->add_option("--samples", lemma_args.samples, "Monte-Carlo draws per case")
      ->capture_default_str();
  lemma->add_option("--eps", lemma_args.epsilon,
                    "affinity floor for the decay diagnostic (> 0)")
      ->capture_default_str();
  lemma->add_option("--ns", lemma_args.ns_text,
                    "comma-separated sample sizes for the decay diagnostic")
      ->capture_default_str();

  TheoryArgs theory_args;
  CLI::App* theory = app.add_subcommand(
      "theory-curve", "Evaluate the closed-form risk curves without sampling");
  theory->add_option("--family", theory_args.family, "reg-d2 or cls")
      ->capture_default_str();
  theory->add_option("--out", theory_args.out, "output directory")->capture_default_str();
  theory->add_option("--l1", theory_args.l1, "covariance eigenvalue along the coefficients")
      ->capture_default_str();
  theory->add_option("--l2", theory_args.l2, "covariance eigenvalue across them")
      ->capture_default_str();
  theory->add_option("--b", theory_args.b, "coefficient magnitude")->capture_default_str();
  theory->add_option("--lam", theory_args.lambda, "ridge penalty")->capture_default_str();
  theory->add_option("--nu-norm", theory_args.nu_norm,
                     "norm of the projected class mean (cls)")->capture_default_str();
  theory->add_option("--mu-norm", theory_args.mu_norm,
                     "norm of the latent class mean (cls)")->capture_default_str();
  theory->add_option("--c", theory_args.c, "error-term coefficient (cls)")
      ->capture_default_str();
  theory->add_option("--kmax", theory_args.k_max, "orders 0..kmax")->capture_default_str();

  DatasetArgs data_args;
  CLI::App* data = app.add_subcommand(
      "dataset-sweep", "Risk-vs-k sweep on an external graph dataset");
  data->add_option("--edges", data_args.edges, "edge list CSV: src,dst[,weight]")
      ->required();
  data->add_option("--features", data_args.features,
                   "node feature CSV, one row per node")->required();
  data->add_option("--labels", data_args.labels,
                   "node label file, one value per line")->required();
  data->add_option("--out", data_args.out, "output directory")->capture_default_str();
  data->add_option("--train-frac", data_args.train_fraction,
                   "training fraction for the random split")->capture_default_str();
  data->add_option("--split-seed", data_args.split_seed, "seed for the random split");
  data->add_option("--split-file", data_args.split_file,
                   "file with explicit training indices, one per line");
  data->add_option("--lam", data_args.lambda, "ridge penalty")->capture_default_str();
  data->add_option("--eps", data_args.epsilon, "affinity floor")->capture_default_str();
  data->add_flag("--eps-all-pairs", data_args.epsilon_all_pairs,
                 "add eps to every pair instead of self-loops only");
  data->add_flag("--reject-isolated", data_args.reject_isolated,
                 "fail on isolated nodes instead of injecting unit self-loops");
  data->add_flag("--sum-duplicates", data_args.sum_duplicates,
                 "sum duplicate edge weights instead of taking the max");
  data->add_option("--max-nodes", data_args.max_nodes,
                   "refuse datasets larger than this (dense-matrix guard)")
      ->capture_default_str();
  data->add_option("--kmax", data_args.k_max, "sweep orders 0..kmax")
      ->capture_default_str();

  std::uint64_t selftest_seed = 97531;
  CLI::App* self = app.add_subcommand("selftest", "Run the built-in invariant checks");
  self->add_option("--seed", selftest_seed, "seed for the synthetic instance")
      ->capture_default_str();

  if (argc <= 1) {
    std::cout << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run 'graphsmooth --help' for usage\n";
    return 1;
  }

  try {
    if (reg->parsed()) return run_sweep(true, *reg, reg_args);
    if (cls->parsed()) return run_sweep(false, *cls, cls_args);
    if (over->parsed()) return run_oversmooth(over_args);
    if (lemma->parsed()) return run_lemma(lemma_args);
    if (theory->parsed()) return run_theory(theory_args);
    if (data->parsed()) return run_dataset(data_args);
    if (self->parsed()) return run_selftest_cmd(selftest_seed);
    std::cout << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exit(e);
  }
}
