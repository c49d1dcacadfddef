#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "graphsmooth/model.hpp"

namespace graphsmooth {

/// Covariance of the population after k aggregation steps.  On the
/// eigenvalues of sigma the map acts as
///   lambda -> (1 + 1/lambda)^{-2k} * lambda,
/// with unchanged eigenvectors; large directions shrink slowly, small ones
/// fast.  sigma must be symmetric positive definite.
Eigen::MatrixXd smoothed_covariance(const Eigen::MatrixXd& sigma, int k);

/// Scalar eigenvalue map behind smoothed_covariance.
double smoothed_eigenvalue(double eigenvalue, int k);

/// Numerical side channel for the regression risk functional.
struct RiskFunctionalInfo {
  double min_normal_eig = 0.0;  ///< smallest eigenvalue of lambda I + M^T S M
  double sqrt_clamp = 0.0;      ///< largest eigenvalue clamp in the sqrt of S
  bool ill_conditioned = false; ///< min_normal_eig below 1e-10
};

/// Limiting test risk of ridge regression when the population covariance of
/// the smoothed points is S:
///   | (I - S^{1/2} M (lambda I + M^T S M)^{-1} M^T S^{1/2}) Sigma^{1/2} b |^2
/// evaluated with a solve against (lambda I + M^T S M), never its inverse.
double regression_risk_functional(const Eigen::MatrixXd& s,
                                  const RegressionModelConfig& config,
                                  double lambda,
                                  RiskFunctionalInfo* info = nullptr);

/// Does one aggregation step lower the limiting regression risk?
struct AssumptionCheck {
  double risk_raw = 0.0;            ///< functional at the raw covariance
  double risk_smoothed_once = 0.0;  ///< functional at the once-smoothed covariance
  bool holds = false;               ///< risk_raw exceeds risk_smoothed_once beyond tolerance
};

/// Compares the functional at sigma and at smoothed_covariance(sigma, 1).
/// holds uses a relative tolerance of 1e-9 so that configurations where the
/// two values agree to rounding (e.g. isotropic covariance with tiny lambda)
/// report false rather than a rounding artifact.
AssumptionCheck check_regression_assumption(const RegressionModelConfig& config,
                                            double lambda);

/// Closed-form risk-vs-k curve for the two-dimensional regression family
/// whose covariance has eigenvectors (1,1)/sqrt(2) and (-1,1)/sqrt(2),
/// coefficients b along the first of these, and a first-coordinate selector
/// as projection.  Throws ConfigMismatchError for any other configuration.
/// Every value is cross-checked against the general functional evaluated at
/// the smoothed covariance; the two routes must agree to 1e-10 relative.
std::vector<double> regression_risk_curve_d2(const RegressionModelConfig& config,
                                             double lambda, int k_max);

/// Parameters of the two-dimensional closed-form family, recovered from a
/// configuration when it matches within tol.
struct RegressionD2Family {
  double eig_aligned = 0.0;   ///< covariance eigenvalue along the coefficient direction
  double eig_opposite = 0.0;  ///< the other eigenvalue
  double scale_b = 0.0;       ///< coefficient magnitude along its eigenvector
};

std::optional<RegressionD2Family> match_regression_d2_family(
    const RegressionModelConfig& config, double tol = 1e-8);

/// Limiting classification risk when the feature variance has shrunk to s:
///   ((s + lambda)^2 + s |nu|^2) / (s + lambda + |nu|^2)^2,
/// where nu is the projected class mean.  Lies in (0, 1] for s, lambda > 0.
double classification_risk_functional(double s, double nu_norm, double lambda);

/// Risk-vs-k curve for classification: the functional at s = 4^{-k} plus an
/// accumulated mixing error term
///   c * sum_{l=0}^{k-1} exp(-|mu|^2 / (2 (1 + 4^{-l}))).
std::vector<double> classification_risk_curve(double nu_norm, double mu_norm,
                                              double lambda,
                                              double error_constant_c,
                                              int k_max);

/// Population limit of one aggregation step for the regression design.
/// With d(x) = |I + Sigma|^{-1/2} exp(-|x|^2_{(I+Sigma)^{-1}} / 2), a point
/// maps to d(x) / (d(x) + epsilon) * (Sigma^{-1} + I)^{-1} x.  The density is
/// evaluated in the log domain and (I + Sigma) is factored once at
/// construction.
class RegressionSmoothingMap {
 public:
  RegressionSmoothingMap(const Eigen::MatrixXd& sigma, double epsilon);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  /// log of the population affinity mass d(x); exact, never underflows.
  double log_density(const Eigen::VectorXd& x) const;
  double density(const Eigen::VectorXd& x) const;

 private:
  double epsilon_;
  double log_det_i_plus_sigma_;
  Eigen::LLT<Eigen::MatrixXd> i_plus_sigma_;  // factorization of I + Sigma
  Eigen::MatrixXd shrink_;                    // (Sigma^{-1} + I)^{-1}
};

/// Population limit of one aggregation step for the two-class design:
///   phi(x) = [ d_+(x) (x + mu) / 2 + d_-(x) (x - mu) / 2 ]
///            / ( 2 epsilon + d_+(x) + d_-(x) ),
/// with d_{+/-}(x) = 2^{-d/2} exp(-|x -/+ mu|^2 / 4).  The two exponents are
/// rescaled by their maximum before exponentiation so far-out points stay
/// finite.
Eigen::VectorXd classification_smoothing_map(const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& mu,
                                             double epsilon);

/// Gaussian integrals of the bump kernel against N(mu, sigma):
///   mass  = E[ w(x, Y) ]   (w with covariance sigma_w, no epsilon floor)
///   first = E[ w(x, Y) Y ]
/// in closed form:
///   mass  = |sigma_w|^{1/2} |sigma_w + sigma|^{-1/2}
///           exp(-|x - mu|^2_{(sigma_w + sigma)^{-1}} / 2)
///   first = mass * (sigma_w^{-1} + sigma^{-1})^{-1}
///                * (sigma_w^{-1} x + sigma^{-1} mu)
struct KernelMoments {
  double mass = 0.0;
  Eigen::VectorXd first_moment;
};

KernelMoments kernel_gaussian_moments(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& mu,
                                      const Eigen::MatrixXd& sigma,
                                      const Eigen::MatrixXd& sigma_w);

}  // namespace graphsmooth
