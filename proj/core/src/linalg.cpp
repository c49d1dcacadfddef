#include "graphsmooth/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "graphsmooth/errors.hpp"

namespace graphsmooth {

SymmetricEig symmetric_eig(const Eigen::MatrixXd& m) {
  // The solver silently reads one triangle, so an asymmetric input would be
  // decomposed as if it were symmetric; reject it instead.
  const double scale = m.size() == 0 ? 1.0 : m.cwiseAbs().maxCoeff();
  if (!is_symmetric(m, 1e-10 * std::max(1.0, scale))) {
    throw EigenDecompositionError(
        "symmetric eigendecomposition requires a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw EigenDecompositionError("symmetric eigendecomposition failed for a " +
                                  std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()) + " matrix");
  }
  return SymmetricEig{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m, double* clamped) {
  const SymmetricEig eig = symmetric_eig(m);
  double worst = 0.0;
  Eigen::VectorXd roots(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values(i);
    if (v < 0.0) {
      worst = std::max(worst, -v);
    }
    roots(i) = std::sqrt(std::max(v, 0.0));
  }
  if (clamped != nullptr) {
    *clamped = worst;
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    return 0.0;
  }
  if (m.rows() <= 32 && m.cols() <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return symmetric_eig(m).values.minCoeff();
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) {
    return false;
  }
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double mahalanobis_norm(const Eigen::VectorXd& v,
                        const Eigen::LLT<Eigen::MatrixXd>& w_factor) {
  return std::sqrt(v.dot(w_factor.solve(v)));
}

}  // namespace graphsmooth
