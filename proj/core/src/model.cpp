#include "graphsmooth/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/linalg.hpp"

namespace graphsmooth {
namespace {

// Shared tolerance for structural checks (symmetry, orthonormality).
constexpr double kStructureTol = 1e-10;

void check_projection(const Eigen::MatrixXd& projection, int latent_dim,
                      int feature_dim, std::vector<std::string>* out) {
  if (projection.rows() != latent_dim || projection.cols() != feature_dim) {
    std::ostringstream msg;
    msg << "projection has shape " << projection.rows() << "x"
        << projection.cols() << ", expected " << latent_dim << "x"
        << feature_dim;
    out->push_back(msg.str());
    return;
  }
  const Eigen::MatrixXd gram =
      projection.transpose() * projection -
      Eigen::MatrixXd::Identity(feature_dim, feature_dim);
  const double dev = gram.cwiseAbs().maxCoeff();
  if (dev > kStructureTol) {
    std::ostringstream msg;
    msg << "projection columns not orthonormal: M^T M != I (max deviation "
        << dev << ")";
    out->push_back(msg.str());
  }
}

void check_dims(int latent_dim, int feature_dim, std::vector<std::string>* out) {
  if (latent_dim <= 0) {
    out->push_back("latent_dim must be positive");
  }
  if (feature_dim <= 0) {
    out->push_back("feature_dim must be positive");
  }
  if (feature_dim > latent_dim) {
    out->push_back("feature_dim exceeds latent_dim");
  }
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (violations.empty()) {
    return "ok";
  }
  std::ostringstream out;
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) {
      out << "; ";
    }
    out << violations[i];
  }
  return out.str();
}

ValidationReport validate(const RegressionModelConfig& config) {
  ValidationReport report;
  check_dims(config.latent_dim, config.feature_dim, &report.violations);
  if (!report.violations.empty()) {
    return report;
  }

  if (config.covariance.rows() != config.latent_dim ||
      config.covariance.cols() != config.latent_dim) {
    report.violations.push_back("covariance has the wrong shape");
  } else if (!is_symmetric(config.covariance, kStructureTol)) {
    report.violations.push_back("covariance not symmetric");
  } else if (min_eigenvalue(config.covariance) <= 0.0) {
    report.violations.push_back("covariance not PD");
  }

  if (config.coefficients.size() != config.latent_dim) {
    report.violations.push_back("coefficients have the wrong length");
  }
  check_projection(config.projection, config.latent_dim, config.feature_dim,
                   &report.violations);
  return report;
}

ValidationReport validate(const ClassificationModelConfig& config) {
  ValidationReport report;
  check_dims(config.latent_dim, config.feature_dim, &report.violations);
  if (!report.violations.empty()) {
    return report;
  }
  if (config.class_mean.size() != config.latent_dim) {
    report.violations.push_back("class_mean has the wrong length");
  }
  check_projection(config.projection, config.latent_dim, config.feature_dim,
                   &report.violations);
  return report;
}

ValidationReport validate(const KernelConfig& config) {
  ValidationReport report;
  if (!(config.epsilon >= 0.0)) {
    report.violations.push_back("epsilon must be >= 0");
  }
  if (config.kernel_covariance.has_value()) {
    const Eigen::MatrixXd& w = *config.kernel_covariance;
    if (w.rows() != w.cols()) {
      report.violations.push_back("kernel_covariance must be square");
    } else if (!is_symmetric(w, kStructureTol)) {
      report.violations.push_back("kernel_covariance not symmetric");
    } else if (min_eigenvalue(w) <= 0.0) {
      report.violations.push_back("kernel_covariance not PD");
    }
  }
  return report;
}

ValidationReport validate(const RiskCurve& curve) {
  ValidationReport report;
  if (curve.ks.empty()) {
    report.violations.push_back("curve has no entries");
    return report;
  }
  for (size_t i = 1; i < curve.ks.size(); ++i) {
    if (curve.ks[i] <= curve.ks[i - 1]) {
      report.violations.push_back("ks not strictly increasing");
      break;
    }
  }
  if (curve.empirical_mean.size() != curve.ks.size() ||
      curve.empirical_std.size() != curve.ks.size()) {
    report.violations.push_back("risk columns and ks disagree in length");
  }
  if (!curve.theory.empty() && curve.theory.size() != curve.ks.size()) {
    report.violations.push_back("theory column and ks disagree in length");
  }
  for (double r : curve.empirical_mean) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      report.violations.push_back("negative or non-finite risk value");
      break;
    }
  }
  if (std::find(curve.ks.begin(), curve.ks.end(), curve.k_star_empirical) ==
      curve.ks.end()) {
    report.violations.push_back("k_star_empirical not among ks");
  }
  return report;
}

LatentDataset make_dataset(const Eigen::MatrixXd& latents,
                           const Eigen::MatrixXd& projection,
                           const Eigen::VectorXd& labels, Eigen::Index n_train,
                           std::uint64_t rng_seed) {
  const Eigen::Index n = latents.rows();
  if (projection.rows() != latents.cols()) {
    throw DimensionMismatchError(
        "projection rows do not match latent dimension");
  }
  if (labels.size() != n) {
    throw DimensionMismatchError("labels length does not match point count");
  }
  if (n_train <= 0 || n_train >= n) {
    throw DimensionMismatchError(
        "n_train must leave both splits non-empty (got n_train=" +
        std::to_string(n_train) + " of n=" + std::to_string(n) + ")");
  }
  LatentDataset ds;
  ds.latents = latents;
  ds.features = latents * projection;
  ds.labels = labels;
  ds.n_train = n_train;
  ds.n_test = n - n_train;
  ds.rng_seed = rng_seed;
  return ds;
}

}  // namespace graphsmooth
