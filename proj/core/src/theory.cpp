#include "graphsmooth/theory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/linalg.hpp"

namespace graphsmooth {
namespace {

constexpr double kIllConditionedFloor = 1e-10;
constexpr double kAssumptionRelTol = 1e-9;
constexpr double kCrossCheckRelTol = 1e-10;

// log det of an SPD matrix from its Cholesky factor.
double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& m,
                                        const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SolveError(std::string("Cholesky factorization failed for ") + what);
  }
  return llt;
}

}  // namespace

double smoothed_eigenvalue(double eigenvalue, int k) {
  if (!(eigenvalue > 0.0)) {
    throw Error("eigenvalue map requires a positive eigenvalue");
  }
  return std::pow(1.0 + 1.0 / eigenvalue, -2.0 * k) * eigenvalue;
}

Eigen::MatrixXd smoothed_covariance(const Eigen::MatrixXd& sigma, int k) {
  if (k < 0) {
    throw Error("smoothing order k must be >= 0");
  }
  if (!is_symmetric(sigma, 1e-10)) {
    throw Error("covariance must be symmetric");
  }
  const SymmetricEig eig = symmetric_eig(sigma);
  if (eig.values.minCoeff() <= 0.0) {
    throw Error("covariance not PD");
  }
  Eigen::VectorXd mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    mapped(i) = smoothed_eigenvalue(eig.values(i), k);
  }
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

double regression_risk_functional(const Eigen::MatrixXd& s,
                                  const RegressionModelConfig& config,
                                  double lambda,
                                  RiskFunctionalInfo* info) {
  const ValidationReport report = validate(config);
  if (!report.passed()) {
    throw ConfigMismatchError("invalid regression config: " +
                              report.to_string());
  }
  if (!(lambda > 0.0)) {
    throw Error("ridge penalty lambda must be > 0");
  }
  const int d = config.latent_dim;
  const int p = config.feature_dim;
  if (s.rows() != d || s.cols() != d) {
    throw DimensionMismatchError("covariance argument has the wrong shape");
  }

  double clamp = 0.0;
  const Eigen::MatrixXd sqrt_s = symmetric_sqrt(s, &clamp);
  const Eigen::MatrixXd& m = config.projection;

  const Eigen::MatrixXd normal =
      lambda * Eigen::MatrixXd::Identity(p, p) + m.transpose() * s * m;
  const Eigen::MatrixXd t = sqrt_s * m;  // d x p
  // H = I - S^{1/2} M (lambda I + M^T S M)^{-1} M^T S^{1/2} via a solve.
  const Eigen::MatrixXd h =
      Eigen::MatrixXd::Identity(d, d) -
      t * checked_llt(normal, "lambda I + M^T S M").solve(t.transpose());

  const Eigen::VectorXd w = symmetric_sqrt(config.covariance) * config.coefficients;

  if (info != nullptr) {
    info->min_normal_eig = min_eigenvalue(normal);
    info->sqrt_clamp = clamp;
    info->ill_conditioned = info->min_normal_eig < kIllConditionedFloor;
  }
  // w^T H^2 w = |H w|^2 since H is symmetric.
  return (h * w).squaredNorm();
}

AssumptionCheck check_regression_assumption(const RegressionModelConfig& config,
                                            double lambda) {
  AssumptionCheck check;
  check.risk_raw = regression_risk_functional(config.covariance, config, lambda);
  check.risk_smoothed_once = regression_risk_functional(
      smoothed_covariance(config.covariance, 1), config, lambda);
  const double scale = std::max(1.0, check.risk_raw);
  check.holds =
      check.risk_raw - check.risk_smoothed_once > kAssumptionRelTol * scale;
  return check;
}

std::optional<RegressionD2Family> match_regression_d2_family(
    const RegressionModelConfig& config, double tol) {
  if (config.latent_dim != 2 || config.feature_dim != 1) {
    return std::nullopt;
  }
  if (validate(config).passed() == false) {
    return std::nullopt;
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  Eigen::Vector2d u_aligned(inv_sqrt2, inv_sqrt2);
  Eigen::Vector2d u_opposite(-inv_sqrt2, inv_sqrt2);

  // The covariance must be diagonalized by the 45-degree rotation ...
  const Eigen::MatrixXd& sigma = config.covariance;
  const double eig_aligned = u_aligned.dot(sigma * u_aligned);
  const double eig_opposite = u_opposite.dot(sigma * u_opposite);
  Eigen::Matrix2d rebuilt = eig_aligned * u_aligned * u_aligned.transpose() +
                            eig_opposite * u_opposite * u_opposite.transpose();
  if ((rebuilt - sigma).cwiseAbs().maxCoeff() > tol) {
    return std::nullopt;
  }
  // ... the coefficients must sit on the aligned eigenvector ...
  const double b = u_aligned.dot(config.coefficients);
  if ((config.coefficients - b * u_aligned).cwiseAbs().maxCoeff() > tol ||
      std::abs(b) <= tol) {
    return std::nullopt;
  }
  // ... and the projection must select the first coordinate (up to sign).
  const Eigen::VectorXd m_col = config.projection.col(0);
  if (std::min((m_col - Eigen::Vector2d(1, 0)).cwiseAbs().maxCoeff(),
               (m_col + Eigen::Vector2d(1, 0)).cwiseAbs().maxCoeff()) > tol) {
    return std::nullopt;
  }
  return RegressionD2Family{eig_aligned, eig_opposite, b};
}

std::vector<double> regression_risk_curve_d2(const RegressionModelConfig& config,
                                             double lambda, int k_max) {
  const auto family = match_regression_d2_family(config);
  if (!family.has_value()) {
    throw ConfigMismatchError(
        "configuration is outside the closed-form two-dimensional family");
  }
  if (k_max < 0) {
    throw Error("k_max must be >= 0");
  }
  const double l1 = family->eig_aligned;
  const double l2 = family->eig_opposite;
  const double b2 = family->scale_b * family->scale_b;

  std::vector<double> curve;
  curve.reserve(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    const double a = smoothed_eigenvalue(l1, k);
    const double c = smoothed_eigenvalue(l2, k);
    const double num = (2.0 * lambda + c) * (2.0 * lambda + c) + c * a;
    const double den = 2.0 * lambda + a + c;
    const double closed = l1 * b2 * num / (den * den);

    // Second route through the general functional; the two must agree.
    const double general = regression_risk_functional(
        smoothed_covariance(config.covariance, k), config, lambda);
    const double scale = std::max({1e-300, std::abs(closed), std::abs(general)});
    if (std::abs(closed - general) > kCrossCheckRelTol * scale) {
      std::ostringstream msg;
      msg << "closed-form and general risk disagree at k = " << k << ": "
          << closed << " vs " << general;
      throw Error(msg.str());
    }
    curve.push_back(closed);
  }
  return curve;
}

double classification_risk_functional(double s, double nu_norm, double lambda) {
  if (!(s > 0.0)) {
    throw Error("variance shrink factor s must be > 0");
  }
  if (!(lambda > 0.0)) {
    throw Error("ridge penalty lambda must be > 0");
  }
  if (nu_norm < 0.0) {
    throw Error("|nu| must be >= 0");
  }
  const double nu2 = nu_norm * nu_norm;
  const double den = s + lambda + nu2;
  return ((s + lambda) * (s + lambda) + s * nu2) / (den * den);
}

std::vector<double> classification_risk_curve(double nu_norm, double mu_norm,
                                              double lambda,
                                              double error_constant_c,
                                              int k_max) {
  if (k_max < 0) {
    throw Error("k_max must be >= 0");
  }
  if (error_constant_c < 0.0) {
    throw Error("error constant must be >= 0");
  }
  const double mu2 = mu_norm * mu_norm;
  std::vector<double> curve;
  curve.reserve(static_cast<size_t>(k_max) + 1);
  double accumulated = 0.0;  // sum over l < k of the per-step mixing error
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      const double shrink = std::pow(4.0, -(k - 1));
      accumulated += std::exp(-mu2 / (2.0 * (1.0 + shrink)));
    }
    curve.push_back(classification_risk_functional(std::pow(4.0, -k), nu_norm,
                                                   lambda) +
                    error_constant_c * accumulated);
  }
  return curve;
}

RegressionSmoothingMap::RegressionSmoothingMap(const Eigen::MatrixXd& sigma,
                                               double epsilon)
    : epsilon_(epsilon) {
  if (epsilon < 0.0) {
    throw Error("epsilon must be >= 0");
  }
  if (!is_symmetric(sigma, 1e-10) || min_eigenvalue(sigma) <= 0.0) {
    throw Error("covariance must be symmetric positive definite");
  }
  const Eigen::Index d = sigma.rows();
  const Eigen::MatrixXd i_plus =
      Eigen::MatrixXd::Identity(d, d) + sigma;
  i_plus_sigma_ = checked_llt(i_plus, "I + Sigma");
  log_det_i_plus_sigma_ = log_det_from_llt(i_plus_sigma_);
  // (Sigma^{-1} + I)^{-1} = (I + Sigma)^{-1} Sigma; solved, not inverted.
  shrink_ = i_plus_sigma_.solve(sigma);
}

double RegressionSmoothingMap::log_density(const Eigen::VectorXd& x) const {
  const double quad = x.dot(i_plus_sigma_.solve(x));
  return -0.5 * log_det_i_plus_sigma_ - 0.5 * quad;
}

double RegressionSmoothingMap::density(const Eigen::VectorXd& x) const {
  return std::exp(log_density(x));
}

Eigen::VectorXd RegressionSmoothingMap::operator()(
    const Eigen::VectorXd& x) const {
  double gate = 1.0;
  if (epsilon_ > 0.0) {
    // d / (d + eps) = 1 / (1 + exp(log eps - log d)); IEEE saturation sends
    // the gate to 0 when the density underflows, which is the exact limit.
    gate = 1.0 / (1.0 + std::exp(std::log(epsilon_) - log_density(x)));
  }
  return gate * (shrink_ * x);
}

Eigen::VectorXd classification_smoothing_map(const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& mu,
                                             double epsilon) {
  if (epsilon < 0.0) {
    throw Error("epsilon must be >= 0");
  }
  if (x.size() != mu.size()) {
    throw DimensionMismatchError("x and mu must have equal length");
  }
  const double d = static_cast<double>(x.size());
  const double e_plus = -0.25 * (x - mu).squaredNorm();
  const double e_minus = -0.25 * (x + mu).squaredNorm();
  const double shift = std::max(e_plus, e_minus);

  // Everything is scaled by 2^{d/2} e^{shift}: the densities become
  // exp(e - shift) <= 1 and the epsilon floor becomes the log-domain term
  // below, so no intermediate can overflow.
  const double s_plus = std::exp(e_plus - shift);
  const double s_minus = std::exp(e_minus - shift);
  double floor_term = 0.0;
  if (epsilon > 0.0) {
    const double log_floor =
        std::log(2.0 * epsilon) + 0.5 * d * std::numbers::ln2 - shift;
    if (log_floor > 700.0) {
      return Eigen::VectorXd::Zero(x.size());  // the floor dominates entirely
    }
    floor_term = std::exp(log_floor);
  }
  const Eigen::VectorXd numerator =
      0.5 * (s_plus * (x + mu) + s_minus * (x - mu));
  return numerator / (floor_term + s_plus + s_minus);
}

KernelMoments kernel_gaussian_moments(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& mu,
                                      const Eigen::MatrixXd& sigma,
                                      const Eigen::MatrixXd& sigma_w) {
  const Eigen::Index d = x.size();
  if (mu.size() != d || sigma.rows() != d || sigma.cols() != d ||
      sigma_w.rows() != d || sigma_w.cols() != d) {
    throw DimensionMismatchError("kernel moment arguments disagree in shape");
  }
  const auto llt_w = checked_llt(sigma_w, "sigma_w");
  const auto llt_s = checked_llt(sigma, "sigma");
  const auto llt_sum = checked_llt(sigma_w + sigma, "sigma_w + sigma");

  const Eigen::VectorXd diff = x - mu;
  const double log_mass = 0.5 * log_det_from_llt(llt_w) -
                          0.5 * log_det_from_llt(llt_sum) -
                          0.5 * diff.dot(llt_sum.solve(diff));

  KernelMoments moments;
  moments.mass = std::exp(log_mass);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd precision_sum =
      llt_w.solve(identity) + llt_s.solve(identity);
  moments.first_moment =
      moments.mass * checked_llt(precision_sum, "sigma_w^{-1} + sigma^{-1}")
                         .solve(llt_w.solve(x) + llt_s.solve(mu));
  return moments;
}

}  // namespace graphsmooth
