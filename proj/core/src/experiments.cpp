#include "graphsmooth/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "graphsmooth/config.hpp"
#include "graphsmooth/errors.hpp"
#include "graphsmooth/graph.hpp"
#include "graphsmooth/learn.hpp"
#include "graphsmooth/linalg.hpp"
#include "graphsmooth/rng.hpp"
#include "graphsmooth/version.hpp"

namespace graphsmooth {
namespace {

void require_valid(const ValidationReport& report, const char* what) {
  if (!report.passed()) {
    throw Error(std::string("invalid ") + what + ": " + report.to_string());
  }
}

int resolve_jobs(int jobs, int n_tasks) {
  int resolved = jobs;
  if (resolved <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    resolved = static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
  }
  return std::clamp(resolved, 1, std::max(1, n_tasks));
}

void check_sweep_ks(const std::vector<int>& ks) {
  if (ks.empty() || ks.front() != 0) {
    throw Error("ks must be non-empty and start at 0");
  }
  for (size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) {
      throw Error("ks must be strictly increasing");
    }
  }
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Inverse square root of an SPD matrix, for whitening discrepancies.
Eigen::MatrixXd symmetric_inv_sqrt(const Eigen::MatrixXd& m) {
  const SymmetricEig eig = symmetric_eig(m);
  if (eig.values.minCoeff() <= 0.0) {
    throw Error("matrix must be positive definite");
  }
  return eig.vectors *
         eig.values.array().rsqrt().matrix().asDiagonal() *
         eig.vectors.transpose();
}

// Largest absolute eigenvalue of a symmetric matrix (its spectral norm).
double symmetric_spectral_norm(const Eigen::MatrixXd& m) {
  return symmetric_eig(m).values.cwiseAbs().maxCoeff();
}

// One smoothing step applied to the latent block without forming L:
// row i of the result is (A x)_i / degree_i.
Eigen::MatrixXd one_step(const Adjacency& adj, const Eigen::MatrixXd& latents) {
  Eigen::MatrixXd out = adj.weights * latents;
  out.array().colwise() /= adj.degrees.array();
  return out;
}

void check_diagnostic_sizes(const std::vector<Eigen::Index>& ns) {
  if (ns.size() < 2) {
    throw Error("the diagnostic needs at least two sample sizes for a slope");
  }
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 2 || (i > 0 && ns[i] <= ns[i - 1])) {
      throw Error("sample sizes must be >= 2 and strictly increasing");
    }
  }
}

double finish_slope(std::vector<DiagnosticRow>& rows) {
  std::vector<double> log_n, log_gap;
  for (const DiagnosticRow& row : rows) {
    log_n.push_back(std::log(static_cast<double>(row.n)));
    log_gap.push_back(std::log(row.sup_first_moment));
  }
  return fit_slope(log_n, log_gap);
}

std::string format_int_list(const std::vector<int>& values) {
  std::ostringstream out;
  out << '[';
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << values[i];
  }
  out << ']';
  return out.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw Error("expected an integer list like [0,1,2], got '" + text + "'");
  }
  std::vector<int> values;
  std::istringstream in(text.substr(1, text.size() - 2));
  std::string token;
  while (std::getline(in, token, ',')) {
    values.push_back(std::stoi(token));
  }
  return values;
}

}  // namespace

LatentDataset sample_regression(const RegressionModelConfig& config,
                                Eigen::Index n, Eigen::Index n_train,
                                std::uint64_t seed) {
  require_valid(validate(config), "regression config");
  Rng rng(seed);
  const Eigen::MatrixXd factor = symmetric_sqrt(config.covariance);
  // Row i is factor * g_i; the factor is symmetric so the row form below is
  // exactly that product.
  const Eigen::MatrixXd latents =
      rng.gaussian_matrix(n, config.latent_dim) * factor;
  const Eigen::VectorXd labels = latents * config.coefficients;
  return make_dataset(latents, config.projection, labels, n_train, seed);
}

LatentDataset sample_classification(const ClassificationModelConfig& config,
                                    Eigen::Index n, Eigen::Index n_train,
                                    std::uint64_t seed) {
  require_valid(validate(config), "classification config");
  Rng rng(seed);
  Eigen::MatrixXd latents(n, config.latent_dim);
  Eigen::VectorXd labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = rng.coin() ? 1.0 : -1.0;
    labels(i) = y;
    latents.row(i) =
        (y * config.class_mean + rng.gaussian_vector(config.latent_dim))
            .transpose();
  }
  return make_dataset(latents, config.projection, labels, n_train, seed);
}

RiskCurve run_trial(const LatentDataset& dataset, const KernelConfig& kernel,
                    double lambda, const std::vector<int>& ks) {
  require_valid(validate(kernel), "kernel config");
  SmoothingOperator op;
  {
    // Scope the adjacency so only one n x n matrix outlives this block.
    const Adjacency adjacency = build_adjacency(dataset.latents, kernel);
    op = row_normalize(adjacency);
  }
  return k_sweep(dataset, op, lambda, ks);
}

bool has_interior_minimum(const RiskCurve& curve) {
  if (curve.ks.size() < 3) {
    return false;
  }
  const int k_star = curve.k_star_empirical;
  if (k_star < 1 || k_star >= curve.ks.back()) {
    return false;
  }
  const auto it = std::find(curve.ks.begin(), curve.ks.end(), k_star);
  const size_t at = static_cast<size_t>(it - curve.ks.begin());
  const double best = curve.empirical_mean[at];
  return best < curve.empirical_mean.front() &&
         best < curve.empirical_mean.back();
}

double fit_error_constant(const std::vector<int>& ks,
                          const std::vector<double>& means, double nu_norm,
                          double mu_norm, double lambda) {
  if (ks.size() != means.size()) {
    throw DimensionMismatchError("ks and means disagree in length");
  }
  const double mu2 = mu_norm * mu_norm;
  double numerator = 0.0;
  double denominator = 0.0;
  for (size_t i = 0; i < ks.size(); ++i) {
    const int k = ks[i];
    if (k < 1 || k > 2) {
      continue;  // the fit uses k in {0,1,2}; k = 0 contributes nothing
    }
    double accumulated = 0.0;
    for (int l = 0; l < k; ++l) {
      accumulated += std::exp(-mu2 / (2.0 * (1.0 + std::pow(4.0, -l))));
    }
    const double base =
        classification_risk_functional(std::pow(4.0, -k), nu_norm, lambda);
    numerator += (means[i] - base) * accumulated;
    denominator += accumulated * accumulated;
  }
  if (denominator == 0.0) {
    return 0.0;
  }
  return std::max(0.0, numerator / denominator);
}

namespace {

void attach_theory(RiskCurve& curve, const SweepSpec& spec) {
  if (spec.is_regression()) {
    const auto& config = std::get<RegressionModelConfig>(spec.model);
    if (!match_regression_d2_family(config).has_value()) {
      return;  // outside the closed-form family; leave the column empty
    }
    const std::vector<double> full =
        regression_risk_curve_d2(config, spec.lambda, curve.ks.back());
    curve.theory.clear();
    for (int k : curve.ks) {
      curve.theory.push_back(full[static_cast<size_t>(k)]);
    }
    return;
  }
  const auto& config = std::get<ClassificationModelConfig>(spec.model);
  const double nu_norm = config.projected_mean().norm();
  const double mu_norm = config.class_mean.norm();
  const double c = spec.error_constant.has_value()
                       ? *spec.error_constant
                       : fit_error_constant(curve.ks, curve.empirical_mean,
                                            nu_norm, mu_norm, spec.lambda);
  const std::vector<double> full = classification_risk_curve(
      nu_norm, mu_norm, spec.lambda, c, curve.ks.back());
  curve.theory.clear();
  for (int k : curve.ks) {
    curve.theory.push_back(full[static_cast<size_t>(k)]);
  }
}

}  // namespace

MonteCarloResult monte_carlo(const SweepSpec& spec) {
  std::visit([](const auto& config) { require_valid(validate(config), "model config"); },
             spec.model);
  require_valid(validate(spec.kernel), "kernel config");
  check_sweep_ks(spec.ks);
  if (spec.lambda <= 0.0) {
    throw Error("ridge penalty lambda must be > 0");
  }
  if (spec.n_trials < 1) {
    throw Error("n_trials must be >= 1");
  }
  if (spec.n_train < 1 || spec.n_train >= spec.n) {
    throw Error("need 1 <= n_train < n");
  }

  const int n_trials = spec.n_trials;
  std::vector<std::optional<RiskCurve>> curves(static_cast<size_t>(n_trials));
  std::vector<std::string> errors(static_cast<size_t>(n_trials));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= n_trials) {
        return;
      }
      try {
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(t);
        const LatentDataset dataset =
            spec.is_regression()
                ? sample_regression(std::get<RegressionModelConfig>(spec.model),
                                    spec.n, spec.n_train, seed)
                : sample_classification(
                      std::get<ClassificationModelConfig>(spec.model), spec.n,
                      spec.n_train, seed);
        curves[static_cast<size_t>(t)] =
            run_trial(dataset, spec.kernel, spec.lambda, spec.ks);
      } catch (const std::exception& e) {
        errors[static_cast<size_t>(t)] = e.what();
      }
    }
  };

  const int workers = resolve_jobs(spec.jobs, n_trials);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (std::thread& worker : pool) {
    worker.join();
  }

  // Deterministic fold in seed order, independent of completion order.
  MonteCarloResult result;
  const size_t n_ks = spec.ks.size();
  std::vector<std::vector<double>> columns(n_ks);
  int interior = 0;
  for (int t = 0; t < n_trials; ++t) {
    const auto& maybe = curves[static_cast<size_t>(t)];
    if (!maybe.has_value()) {
      std::ostringstream msg;
      msg << "trial " << t << " (seed " << spec.base_seed + t
          << "): " << errors[static_cast<size_t>(t)];
      result.failures.push_back(msg.str());
      continue;
    }
    for (size_t i = 0; i < n_ks; ++i) {
      columns[i].push_back(maybe->empirical_mean[i]);
    }
    result.per_trial_limit.push_back(maybe->oversmoothing_level);
    if (has_interior_minimum(*maybe)) {
      ++interior;
    }
  }
  const int successes = n_trials - static_cast<int>(result.failures.size());
  if (successes == 0) {
    throw Error("every trial failed; first failure: " + result.failures.front());
  }

  RiskCurve& curve = result.curve;
  curve.ks = spec.ks;
  curve.n_trials = successes;
  result.per_trial_risks.resize(successes, static_cast<Eigen::Index>(n_ks));
  for (size_t i = 0; i < n_ks; ++i) {
    const std::vector<double>& col = columns[i];
    double mean = 0.0;
    for (double v : col) {
      mean += v;
    }
    mean /= static_cast<double>(col.size());
    double var = 0.0;
    for (size_t t = 0; t < col.size(); ++t) {
      result.per_trial_risks(static_cast<Eigen::Index>(t),
                             static_cast<Eigen::Index>(i)) = col[t];
      var += (col[t] - mean) * (col[t] - mean);
    }
    curve.empirical_mean.push_back(mean);
    curve.empirical_std.push_back(
        col.size() > 1 ? std::sqrt(var / static_cast<double>(col.size() - 1))
                       : 0.0);
  }
  size_t best = 0;
  for (size_t i = 1; i < n_ks; ++i) {
    if (curve.empirical_mean[i] < curve.empirical_mean[best]) {
      best = i;
    }
  }
  curve.k_star_empirical = curve.ks[best];
  double limit_sum = 0.0;
  for (double v : result.per_trial_limit) {
    limit_sum += v;
  }
  curve.oversmoothing_level = limit_sum / static_cast<double>(successes);
  result.interior_fraction =
      static_cast<double>(interior) / static_cast<double>(successes);
  attach_theory(curve, spec);
  return result;
}

DiagnosticTable smoothing_map_diagnostic(const RegressionModelConfig& config,
                                         const KernelConfig& kernel,
                                         const std::vector<Eigen::Index>& ns,
                                         std::uint64_t seed) {
  require_valid(validate(config), "regression config");
  require_valid(validate(kernel), "kernel config");
  if (!(kernel.epsilon > 0.0)) {
    throw DegenerateDegreeError(
        "the population map needs an affinity floor; epsilon must be > 0");
  }
  check_diagnostic_sizes(ns);

  const RegressionSmoothingMap phi(config.covariance, kernel.epsilon);
  const Eigen::LLT<Eigen::MatrixXd> cov_factor(config.covariance);
  const Eigen::MatrixXd whiten = symmetric_inv_sqrt(config.covariance);

  DiagnosticTable table;
  for (size_t idx = 0; idx < ns.size(); ++idx) {
    const Eigen::Index n = ns[idx];
    const LatentDataset dataset =
        sample_regression(config, n, n / 2, seed + idx);
    const Adjacency adjacency = build_adjacency(dataset.latents, kernel);
    const Eigen::MatrixXd smoothed = one_step(adjacency, dataset.latents);

    DiagnosticRow row;
    row.n = n;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd x = dataset.latents.row(i).transpose();
      const Eigen::VectorXd x1 = smoothed.row(i).transpose();
      const Eigen::VectorXd mapped = phi(x);
      row.sup_first_moment = std::max(
          row.sup_first_moment, mahalanobis_norm(x1 - mapped, cov_factor));
      const Eigen::MatrixXd gap =
          x1 * x1.transpose() - mapped * mapped.transpose();
      row.sup_second_moment =
          std::max(row.sup_second_moment,
                   symmetric_spectral_norm(whiten * gap * whiten));
    }
    table.rows.push_back(row);
  }
  table.loglog_slope = finish_slope(table.rows);
  return table;
}

DiagnosticTable smoothing_map_diagnostic(const ClassificationModelConfig& config,
                                         const KernelConfig& kernel,
                                         const std::vector<Eigen::Index>& ns,
                                         std::uint64_t seed) {
  require_valid(validate(config), "classification config");
  require_valid(validate(kernel), "kernel config");
  if (!(kernel.epsilon > 0.0)) {
    throw DegenerateDegreeError(
        "the population map needs an affinity floor; epsilon must be > 0");
  }
  check_diagnostic_sizes(ns);

  DiagnosticTable table;
  for (size_t idx = 0; idx < ns.size(); ++idx) {
    const Eigen::Index n = ns[idx];
    const LatentDataset dataset =
        sample_classification(config, n, n / 2, seed + idx);
    const Adjacency adjacency = build_adjacency(dataset.latents, kernel);
    const Eigen::MatrixXd smoothed = one_step(adjacency, dataset.latents);

    DiagnosticRow row;
    row.n = n;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd x = dataset.latents.row(i).transpose();
      const Eigen::VectorXd x1 = smoothed.row(i).transpose();
      const Eigen::VectorXd mapped =
          classification_smoothing_map(x, config.class_mean, kernel.epsilon);
      row.sup_first_moment =
          std::max(row.sup_first_moment, (x1 - mapped).norm());
      row.sup_second_moment = std::max(
          row.sup_second_moment,
          symmetric_spectral_norm(x1 * x1.transpose() -
                                  mapped * mapped.transpose()));
    }
    table.rows.push_back(row);
  }
  table.loglog_slope = finish_slope(table.rows);
  return table;
}

KernelMoments mc_kernel_gaussian_moments(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& mu,
                                         const Eigen::MatrixXd& sigma,
                                         const Eigen::MatrixXd& sigma_w,
                                         Eigen::Index n_samples,
                                         std::uint64_t seed) {
  const Eigen::Index d = x.size();
  if (mu.size() != d || sigma.rows() != d || sigma.cols() != d ||
      sigma_w.rows() != d || sigma_w.cols() != d) {
    throw DimensionMismatchError("kernel moment arguments disagree in shape");
  }
  if (n_samples <= 0) {
    throw Error("n_samples must be positive");
  }
  const Eigen::MatrixXd factor = symmetric_sqrt(sigma);
  const Eigen::LLT<Eigen::MatrixXd> llt_w(sigma_w);
  if (llt_w.info() != Eigen::Success) {
    throw SolveError("sigma_w is not positive definite");
  }

  Rng rng(seed);
  double mass_sum = 0.0;
  Eigen::VectorXd first_sum = Eigen::VectorXd::Zero(d);
  constexpr Eigen::Index kBatch = 1 << 16;
  Eigen::Index remaining = n_samples;
  while (remaining > 0) {
    const Eigen::Index b = std::min(kBatch, remaining);
    Eigen::MatrixXd draws = rng.gaussian_matrix(b, d) * factor;
    draws.rowwise() += mu.transpose();
    const Eigen::MatrixXd centered = draws.rowwise() - x.transpose();
    // Quadratic form per row, via a solve against sigma_w.
    const Eigen::MatrixXd solved = llt_w.solve(centered.transpose());
    const Eigen::ArrayXd quad =
        (centered.array() * solved.transpose().array()).rowwise().sum();
    const Eigen::ArrayXd weights = (-0.5 * quad).exp();
    mass_sum += weights.sum();
    first_sum += draws.transpose() * weights.matrix();
    remaining -= b;
  }
  KernelMoments moments;
  moments.mass = mass_sum / static_cast<double>(n_samples);
  moments.first_moment = first_sum / static_cast<double>(n_samples);
  return moments;
}

namespace {

// Random covariance with spectrum in [1/2, 2]: orthogonal axes from the QR
// factorization of a Gaussian matrix, eigenvalues drawn uniformly.
Eigen::MatrixXd random_spd(int dim, Rng& rng) {
  const Eigen::MatrixXd raw = rng.gaussian_matrix(dim, dim);
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ();
  Eigen::VectorXd eigs(dim);
  for (int i = 0; i < dim; ++i) {
    eigs(i) = 0.5 + 1.5 * rng.uniform();
  }
  return q * eigs.asDiagonal() * q.transpose();
}

}  // namespace

MomentCheckCase random_moment_case(int dim, std::uint64_t seed) {
  if (dim < 1) {
    throw Error("random_moment_case: dim must be >= 1");
  }
  Rng rng(seed);
  MomentCheckCase check_case;
  check_case.sigma = random_spd(dim, rng);
  check_case.sigma_w = random_spd(dim, rng);
  check_case.mu = rng.gaussian_vector(dim);
  check_case.x =
      check_case.mu + symmetric_sqrt(check_case.sigma) * rng.gaussian_vector(dim);
  return check_case;
}

RegressionModelConfig default_regression_config() {
  RegressionModelConfig config;
  config.latent_dim = 2;
  config.feature_dim = 1;
  config.covariance = (Eigen::Matrix2d() << 1.25, 0.75, 0.75, 1.25).finished();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  config.coefficients = Eigen::Vector2d(inv_sqrt2, inv_sqrt2);
  config.projection = (Eigen::MatrixXd(2, 1) << 1.0, 0.0).finished();
  return config;
}

ClassificationModelConfig default_classification_config() {
  ClassificationModelConfig config;
  config.latent_dim = 2;
  config.feature_dim = 1;
  config.projection = (Eigen::MatrixXd(2, 1) << 1.0, 0.0).finished();
  const double coord = 4.0 / std::numbers::sqrt2;
  config.class_mean = Eigen::Vector2d(coord, coord);
  return config;
}

namespace {

std::vector<int> contiguous_ks(int k_max) {
  std::vector<int> ks(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    ks[static_cast<size_t>(k)] = k;
  }
  return ks;
}

}  // namespace

SweepSpec default_regression_sweep() {
  SweepSpec spec;
  spec.model = default_regression_config();
  spec.kernel.epsilon = 0.0;
  spec.lambda = 0.1;
  spec.n = 2000;
  spec.n_train = 1000;
  spec.n_trials = 20;
  spec.ks = contiguous_ks(10);
  spec.base_seed = kDefaultSeed;
  return spec;
}

SweepSpec default_classification_sweep() {
  SweepSpec spec = default_regression_sweep();
  spec.model = default_classification_config();
  spec.ks = contiguous_ks(8);
  return spec;
}

Manifest manifest_for_sweep(const SweepSpec& spec) {
  Manifest manifest;
  manifest.set("version", kVersion);
  manifest.set("task", spec.is_regression() ? "regression" : "classification");
  manifest.set("lambda", spec.lambda);
  manifest.set("epsilon", spec.kernel.epsilon);
  if (spec.kernel.kernel_covariance.has_value()) {
    manifest.set("kernel_sigma_w", format_matrix(*spec.kernel.kernel_covariance));
  }
  manifest.set("n", static_cast<std::int64_t>(spec.n));
  manifest.set("n_train", static_cast<std::int64_t>(spec.n_train));
  manifest.set("trials", spec.n_trials);
  manifest.set("ks", format_int_list(spec.ks));
  manifest.set("seed", spec.base_seed);
  manifest.set("jobs", spec.jobs);
  if (spec.error_constant.has_value()) {
    manifest.set("error_constant", *spec.error_constant);
  } else if (!spec.is_regression()) {
    manifest.set("error_constant", "fit");
  }
  if (spec.is_regression()) {
    const auto& config = std::get<RegressionModelConfig>(spec.model);
    manifest.set("d", config.latent_dim);
    manifest.set("p", config.feature_dim);
    manifest.set("sigma", format_matrix(config.covariance));
    manifest.set("beta_star", format_vector(config.coefficients));
    manifest.set("projection", format_matrix(config.projection));
  } else {
    const auto& config = std::get<ClassificationModelConfig>(spec.model);
    manifest.set("d", config.latent_dim);
    manifest.set("p", config.feature_dim);
    manifest.set("mu", format_vector(config.class_mean));
    manifest.set("projection", format_matrix(config.projection));
  }
  return manifest;
}

SweepSpec sweep_from_manifest(const Manifest& manifest) {
  SweepSpec spec;
  const std::string task = manifest.get("task");
  const int d = static_cast<int>(manifest.get_int("d"));
  const int p = static_cast<int>(manifest.get_int("p"));
  if (task == "regression") {
    RegressionModelConfig config;
    config.latent_dim = d;
    config.feature_dim = p;
    config.covariance = parse_matrix(manifest.get("sigma"), d, d);
    config.coefficients = parse_vector(manifest.get("beta_star"), d);
    config.projection = parse_matrix(manifest.get("projection"), d, p);
    spec.model = config;
  } else if (task == "classification") {
    ClassificationModelConfig config;
    config.latent_dim = d;
    config.feature_dim = p;
    config.class_mean = parse_vector(manifest.get("mu"), d);
    config.projection = parse_matrix(manifest.get("projection"), d, p);
    spec.model = config;
  } else {
    throw Error("manifest has unknown task '" + task + "'");
  }
  spec.lambda = manifest.get_double("lambda");
  spec.kernel.epsilon = manifest.get_double("epsilon");
  if (manifest.has("kernel_sigma_w")) {
    spec.kernel.kernel_covariance = parse_matrix(manifest.get("kernel_sigma_w"));
  }
  spec.n = manifest.get_int("n");
  spec.n_train = manifest.get_int("n_train");
  spec.n_trials = static_cast<int>(manifest.get_int("trials"));
  spec.ks = parse_int_list(manifest.get("ks"));
  spec.base_seed = manifest.get_uint("seed");
  spec.jobs = static_cast<int>(manifest.get_int("jobs"));
  if (manifest.has("error_constant") &&
      manifest.get("error_constant") != "fit") {
    spec.error_constant = manifest.get_double("error_constant");
  }
  return spec;
}

}  // namespace graphsmooth
