#pragma once

#include <Eigen/Dense>

namespace graphsmooth {

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
struct SymmetricEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

/// Decomposes a symmetric matrix; throws EigenDecompositionError when the
/// iteration fails to converge.
SymmetricEig symmetric_eig(const Eigen::MatrixXd& m);

/// Square root of a symmetric positive semi-definite matrix via its
/// eigendecomposition.  Eigenvalues are clamped at max(lambda, 0) before the
/// square root; the largest clamped magnitude is reported through *clamped
/// when the pointer is non-null.  Callers treat clamps above 1e-12 as a
/// warning sign that the input was not PSD to working precision.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m,
                               double* clamped = nullptr);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

/// True when max_ij |m_ij - m_ji| <= tol.
bool is_symmetric(const Eigen::MatrixXd& m, double tol);

/// Mahalanobis norm sqrt(v^T W^{-1} v) for symmetric positive definite W.
double mahalanobis_norm(const Eigen::VectorXd& v, const Eigen::LLT<Eigen::MatrixXd>& w_factor);

}  // namespace graphsmooth
