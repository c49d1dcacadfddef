#include <doctest.h>

#include <cmath>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/linalg.hpp"
#include "graphsmooth/rng.hpp"
#include "oracles.hpp"

using namespace graphsmooth;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd raw = rng.gaussian_matrix(n, n);
  return 0.5 * (raw + raw.transpose());
}

}  // namespace

TEST_CASE("symmetric_eig reconstructs the input") {
  const Eigen::MatrixXd m = random_symmetric(6, 101);
  const SymmetricEig eig = symmetric_eig(m);
  const Eigen::MatrixXd rebuilt =
      eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12);
  // Orthonormal eigenvectors.
  const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("symmetric_sqrt squares back to the matrix") {
  Eigen::MatrixXd m = random_symmetric(5, 7);
  m = oracles::naive_matmul(m, m);  // guaranteed PSD
  double clamped = -1.0;
  const Eigen::MatrixXd root = symmetric_sqrt(m, &clamped);
  CHECK(clamped <= 1e-12);
  const Eigen::MatrixXd square = oracles::naive_matmul(root, root);
  CHECK((square - m).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("symmetric_sqrt clamps small negative eigenvalues and reports them") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.0, 0.0, -1e-14;
  double clamped = 0.0;
  const Eigen::MatrixXd root = symmetric_sqrt(m, &clamped);
  CHECK(clamped == doctest::Approx(1e-14).epsilon(0.01));
  CHECK(root(1, 1) == 0.0);
  CHECK(root(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("spectral_norm equals the largest singular value") {
  // Rank-one uv^T has spectral norm |u||v|.
  Eigen::VectorXd u(3);
  u << 1.0, -2.0, 2.0;  // norm 3
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;  // norm 5
  const Eigen::MatrixXd m = u * v.transpose();
  CHECK(spectral_norm(m) == doctest::Approx(15.0).epsilon(1e-12));

  // Against the naive power iteration on a random matrix.
  Rng rng(3);
  const Eigen::MatrixXd r = rng.gaussian_matrix(8, 8);
  const Eigen::MatrixXd rtr = oracles::naive_matmul(r.transpose(), r);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(8);
  for (int i = 0; i < 4000; ++i) {
    w = rtr * w;
    w /= w.norm();
  }
  const double top = std::sqrt(w.dot(rtr * w));
  CHECK(spectral_norm(r) == doctest::Approx(top).epsilon(1e-9));
}

TEST_CASE("min_eigenvalue flags indefinite matrices") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  CHECK(min_eigenvalue(m) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("is_symmetric tolerance behaves as a cutoff") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 1.0 + 5e-11, 1.0, 1.0;
  CHECK(is_symmetric(m, 1e-10));
  CHECK_FALSE(is_symmetric(m, 1e-12));
}

TEST_CASE("mahalanobis_norm matches the explicit inverse on a diagonal") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 4.0, 0.0, 0.0, 0.25;
  Eigen::VectorXd v(2);
  v << 2.0, 1.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  // v^T Sigma^-1 v = 4/4 + 1/0.25 = 5.
  CHECK(mahalanobis_norm(v, llt) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("symmetric_eig rejects a nonsymmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(symmetric_eig(m), EigenDecompositionError);
}
