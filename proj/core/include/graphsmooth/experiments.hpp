#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "graphsmooth/csv.hpp"
#include "graphsmooth/manifest.hpp"
#include "graphsmooth/model.hpp"
#include "graphsmooth/theory.hpp"

namespace graphsmooth {

/// Seed used by the command-line tool when none is given.
inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Draws n latent points from N(0, covariance) with labels y = x . beta.
/// The covariance factor comes from the same eigendecomposition square root
/// the closed-form module uses, so sampler and theory share one numerical
/// convention.  Equal seeds give bitwise-equal datasets; the first n_train
/// rows are the training split.
LatentDataset sample_regression(const RegressionModelConfig& config,
                                Eigen::Index n, Eigen::Index n_train,
                                std::uint64_t seed);

/// Draws n points of the two-class design: per point a fair coin picks the
/// label y in {-1, +1}, then x ~ N(y * class_mean, I).  The random stream is
/// consumed coin-first, then the point's coordinates, point by point.
LatentDataset sample_classification(const ClassificationModelConfig& config,
                                    Eigen::Index n, Eigen::Index n_train,
                                    std::uint64_t seed);

/// One full trial: build the affinity graph on the dataset's latents,
/// normalize it, and sweep the smoothing order.  No theory column attached.
RiskCurve run_trial(const LatentDataset& dataset, const KernelConfig& kernel,
                    double lambda, const std::vector<int>& ks);

/// Everything a sweep experiment depends on.
struct SweepSpec {
  std::variant<RegressionModelConfig, ClassificationModelConfig> model;
  KernelConfig kernel;
  double lambda = 0.1;
  Eigen::Index n = 2000;
  Eigen::Index n_train = 1000;
  int n_trials = 20;
  std::vector<int> ks;        ///< strictly increasing, starts at 0
  std::uint64_t base_seed = kDefaultSeed;  ///< trial t uses base_seed + t
  int jobs = 0;               ///< worker threads; 0 = automatic
  /// Mixing-error constant of the classification theory curve; fitted from
  /// the empirical means at k in {0, 1, 2} when absent.
  std::optional<double> error_constant;

  bool is_regression() const {
    return std::holds_alternative<RegressionModelConfig>(model);
  }
};

/// Aggregate of many independent trials.
struct MonteCarloResult {
  RiskCurve curve;                   ///< means/stds over trials, theory attached
  Eigen::MatrixXd per_trial_risks;   ///< one row per successful trial
  std::vector<double> per_trial_limit;  ///< oversmoothing level per trial
  double interior_fraction = 0.0;    ///< trials with a strict interior minimizer
  std::vector<std::string> failures; ///< messages of failed trials, if any
};

/// Runs n_trials independent trials (seeds base_seed + t) on a bounded
/// worker pool and folds the results in seed order, so the outcome does not
/// depend on scheduling or the jobs count.  Trials that throw are recorded
/// in failures; the run only fails when every trial does.  The theory column
/// is attached when the model matches a closed-form family.
MonteCarloResult monte_carlo(const SweepSpec& spec);

/// True when the curve's minimizer is strictly interior: k* >= 1, k* below
/// the last swept order, and risk(k*) strictly below both endpoints.
bool has_interior_minimum(const RiskCurve& curve);

/// Least-squares fit of the classification error constant on the curve
/// entries with k in {0, 1, 2}, clamped at zero.
double fit_error_constant(const std::vector<int>& ks,
                          const std::vector<double>& means, double nu_norm,
                          double mu_norm, double lambda);

/// Worst-case gap between one empirical smoothing step and the population
/// map, at several sample sizes.  Rows come with the slope of
/// log(sup first-moment gap) against log(n).
struct DiagnosticTable {
  std::vector<DiagnosticRow> rows;
  double loglog_slope = 0.0;
};

/// Regression variant: gaps are measured in the Mahalanobis norm of the
/// latent covariance (first moment) and the covariance-whitened spectral
/// norm (second moment).  Requires kernel.epsilon > 0; the population map is
/// only defined with the affinity floor, so epsilon = 0 is rejected with
/// DegenerateDegreeError.  Sample size i uses seed + i.
DiagnosticTable smoothing_map_diagnostic(const RegressionModelConfig& config,
                                         const KernelConfig& kernel,
                                         const std::vector<Eigen::Index>& ns,
                                         std::uint64_t seed);

/// Classification variant: Euclidean and plain spectral norms.
DiagnosticTable smoothing_map_diagnostic(const ClassificationModelConfig& config,
                                         const KernelConfig& kernel,
                                         const std::vector<Eigen::Index>& ns,
                                         std::uint64_t seed);

/// Monte-Carlo estimate of the closed-form kernel moments: averages w(x, Y)
/// and w(x, Y) Y over n_samples draws Y ~ N(mu, sigma).  Shares no code with
/// the closed form beyond the covariance square root, so the two act as
/// independent routes to the same quantity.
KernelMoments mc_kernel_gaussian_moments(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& mu,
                                         const Eigen::MatrixXd& sigma,
                                         const Eigen::MatrixXd& sigma_w,
                                         Eigen::Index n_samples,
                                         std::uint64_t seed);

/// One randomized input for the kernel-moment cross-check: covariances with
/// eigenvalues in [1/2, 2] on random orthogonal axes, mu standard normal,
/// and x drawn from N(mu, sigma) so the kernel mass stays well away from the
/// underflow regime where a Monte-Carlo reference loses all relative
/// accuracy.
struct MomentCheckCase {
  Eigen::VectorXd x;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma_w;
};

MomentCheckCase random_moment_case(int dim, std::uint64_t seed);

/// The stock two-dimensional regression experiment: covariance with
/// eigenvalues 2 and 1/2 on the 45-degree rotated axes, coefficients of unit
/// length along the large eigenvector, first-coordinate projection.
RegressionModelConfig default_regression_config();

/// The stock two-class experiment: |mu| = 4 along the diagonal in d = 2,
/// first-coordinate projection.
ClassificationModelConfig default_classification_config();

SweepSpec default_regression_sweep();
SweepSpec default_classification_sweep();

/// Serializes a sweep spec into a manifest (adding the artifact version) and
/// reconstructs it; manifest -> spec -> run regenerates outputs byte for
/// byte.
Manifest manifest_for_sweep(const SweepSpec& spec);
SweepSpec sweep_from_manifest(const Manifest& manifest);

}  // namespace graphsmooth
