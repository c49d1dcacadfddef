#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace graphsmooth {

/// Ground truth for the linear regression task: latent points are drawn from
/// N(0, covariance), labels are y = x . coefficients, and the observed
/// features are z = projection^T x.
struct RegressionModelConfig {
  int latent_dim = 0;   ///< dimension of the latent points
  int feature_dim = 0;  ///< dimension of the observed features
  Eigen::MatrixXd covariance;    ///< latent covariance, latent_dim x latent_dim SPD
  Eigen::VectorXd coefficients;  ///< label coefficients, length latent_dim
  Eigen::MatrixXd projection;    ///< latent_dim x feature_dim, orthonormal columns
};

/// Ground truth for the two-class task: a fair label y in {-1, +1} is drawn
/// first, then x ~ N(y * class_mean, I).  Features are z = projection^T x.
struct ClassificationModelConfig {
  int latent_dim = 0;
  int feature_dim = 0;
  Eigen::MatrixXd projection;  ///< latent_dim x feature_dim, orthonormal columns
  Eigen::VectorXd class_mean;  ///< length latent_dim

  /// Mean of the positive class in feature space, projection^T class_mean.
  Eigen::VectorXd projected_mean() const { return projection.transpose() * class_mean; }
};

/// Parameters of the pairwise affinity w(x, x') = epsilon + exp(-|x - x'|^2 / 2).
struct KernelConfig {
  double epsilon = 0.0;  ///< uniform affinity floor, must be >= 0
  /// Covariance of the Gaussian bump; only the closed-form moment helpers
  /// honour a non-identity value, the graph builder always uses the identity.
  std::optional<Eigen::MatrixXd> kernel_covariance;
};

/// A sampled cohort.  The first n_train rows are the training split and the
/// remaining n_test rows are the test split, always in that order.
struct LatentDataset {
  Eigen::MatrixXd latents;   ///< n x latent_dim
  Eigen::MatrixXd features;  ///< n x feature_dim, equal to latents * projection
  Eigen::VectorXd labels;    ///< length n
  Eigen::Index n_train = 0;
  Eigen::Index n_test = 0;
  std::uint64_t rng_seed = 0;  ///< seed the dataset was drawn from

  Eigen::Index size() const { return latents.rows(); }
  auto train_features() const { return features.topRows(n_train); }
  auto test_features() const { return features.bottomRows(n_test); }
  auto train_labels() const { return labels.head(n_train); }
  auto test_labels() const { return labels.tail(n_test); }
};

/// Builds a dataset from raw parts, recomputing features = latents * projection
/// so the identity holds bit for bit.  Throws DimensionMismatchError when the
/// shapes or the split are inconsistent.
LatentDataset make_dataset(const Eigen::MatrixXd& latents,
                           const Eigen::MatrixXd& projection,
                           const Eigen::VectorXd& labels, Eigen::Index n_train,
                           std::uint64_t rng_seed);

/// A fitted ridge regressor together with the smoothing order of the
/// features it was trained on.
struct RidgeModel {
  double lambda = 0.0;           ///< ridge penalty, > 0
  Eigen::VectorXd coefficients;  ///< fitted weights, length feature_dim
  int smoothing_order = 0;       ///< how many aggregation steps the features saw
};

/// Test risk as a function of the smoothing order k.
struct RiskCurve {
  std::vector<int> ks;                 ///< strictly increasing, starts at 0
  std::vector<double> empirical_mean;  ///< mean test risk per k
  std::vector<double> empirical_std;   ///< sample std per k (0 for one trial)
  std::vector<double> theory;          ///< closed-form curve; empty when unavailable
  int k_star_empirical = 0;    ///< smallest k attaining the minimal mean risk
  double oversmoothing_level = 0.0;  ///< risk of the rank-one fully smoothed fit
  int n_trials = 1;

  Eigen::Index size() const { return static_cast<Eigen::Index>(ks.size()); }
};

/// Outcome of a configuration validation pass: empty means accepted.
struct ValidationReport {
  std::vector<std::string> violations;

  bool passed() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const RegressionModelConfig& config);
ValidationReport validate(const ClassificationModelConfig& config);
ValidationReport validate(const KernelConfig& config);
ValidationReport validate(const RiskCurve& curve);

}  // namespace graphsmooth
