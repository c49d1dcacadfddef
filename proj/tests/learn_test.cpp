#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/graph.hpp"
#include "graphsmooth/learn.hpp"
#include "graphsmooth/model.hpp"
#include "graphsmooth/rng.hpp"
#include "oracles.hpp"

using namespace graphsmooth;

namespace {

SmoothingOperator operator_for(const Eigen::MatrixXd& latents, double eps) {
  return row_normalize(build_adjacency(latents, KernelConfig{eps, {}}));
}

LatentDataset tiny_dataset(Eigen::Index n, Eigen::Index n_train,
                           std::uint64_t seed) {
  Rng rng(seed);
  LatentDataset ds;
  ds.latents = rng.gaussian_matrix(n, 2);
  ds.features = ds.latents;
  ds.labels = rng.gaussian_matrix(n, 1).col(0);
  ds.n_train = n_train;
  ds.n_test = n - n_train;
  ds.rng_seed = seed;
  return ds;
}

}  // namespace

TEST_CASE("all-ones design shrinks the exact-fit coefficient to 1/(1+lambda)") {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Ones(32, 1);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(32);
  for (double lambda : {0.1, 1.0, 7.5}) {
    const RidgeModel model = ridge_fit(z, y, lambda);
    CHECK(model.coefficients(0)
          == doctest::Approx(1.0 / (1.0 + lambda)).epsilon(1e-14));
    CHECK(model.lambda == lambda);
  }
}

TEST_CASE("a huge penalty crushes the coefficients toward zero") {
  Rng rng(5);
  const Eigen::MatrixXd z = rng.gaussian_matrix(64, 3);
  const Eigen::VectorXd y = rng.gaussian_matrix(64, 1).col(0);
  const RidgeModel model = ridge_fit(z, y, 1e12);
  CHECK(model.coefficients.norm() < 1e-9);
}

TEST_CASE("ridge_fit agrees with the full-pivot normal-equation oracle") {
  Rng rng(9);
  for (int instance = 0; instance < 10; ++instance) {
    const Eigen::MatrixXd z = rng.gaussian_matrix(50, 3);
    const Eigen::VectorXd y = rng.gaussian_matrix(50, 1).col(0);
    const double lambda = 0.01 + rng.uniform();
    const Eigen::VectorXd want = oracles::ridge_by_normal_equations(z, y, lambda);
    const RidgeModel model = ridge_fit(z, y, lambda);
    CHECK((model.coefficients - want).norm() <= 1e-8);
  }
}

TEST_CASE("the fitted coefficients minimize the ridge objective") {
  Rng rng(11);
  const Eigen::MatrixXd z = rng.gaussian_matrix(40, 4);
  const Eigen::VectorXd y = rng.gaussian_matrix(40, 1).col(0);
  const double lambda = 0.3;
  const RidgeModel model = ridge_fit(z, y, lambda);
  const double at_min = oracles::ridge_objective(z, y, model.coefficients, lambda);

  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd delta = rng.gaussian_matrix(4, 1).col(0);
    delta *= 1e-3 / delta.norm();
    CHECK(oracles::ridge_objective(z, y, model.coefficients + delta, lambda)
          >= at_min);
  }
}

TEST_CASE("ridge_fit rejects bad penalties and mismatched shapes") {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Ones(4, 1);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(ridge_fit(z, y, 0.0), Error);
  CHECK_THROWS_AS(ridge_fit(z, y, -1.0), Error);
  CHECK_THROWS_AS(ridge_fit(z, Eigen::VectorXd::Ones(5), 0.1),
                  DimensionMismatchError);
}

TEST_CASE("test_risk is exact on a perfect fit and on the zero model") {
  Rng rng(17);
  const Eigen::MatrixXd z = rng.gaussian_matrix(20, 2);
  Eigen::VectorXd beta(2);
  beta << 1.5, -0.5;

  RidgeModel exact;
  exact.lambda = 1.0;
  exact.coefficients = beta;
  CHECK(test_risk(z, z * beta, exact) <= 1e-28);

  RidgeModel zero;
  zero.lambda = 1.0;
  zero.coefficients = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd signs(20);
  for (Eigen::Index i = 0; i < 20; ++i) {
    signs(i) = (i % 2 == 0) ? 1.0 : -1.0;
  }
  CHECK(test_risk(z, signs, zero) == 1.0);

  // Random case against the scalar-loop oracle.
  const Eigen::VectorXd y = rng.gaussian_matrix(20, 1).col(0);
  const double got = test_risk(z, y, exact);
  CHECK(oracles::rel_err(got, oracles::naive_test_risk(z, y, beta)) < 1e-12);

  CHECK_THROWS_AS(test_risk(Eigen::MatrixXd::Zero(0, 2),
                            Eigen::VectorXd::Zero(0), exact),
                  DimensionMismatchError);
  CHECK_THROWS_AS(test_risk(Eigen::MatrixXd::Zero(3, 3),
                            Eigen::VectorXd::Zero(3), exact),
                  DimensionMismatchError);
}

TEST_CASE("test_risk does not care about row order") {
  Rng rng(19);
  const Eigen::MatrixXd z = rng.gaussian_matrix(30, 2);
  const Eigen::VectorXd y = rng.gaussian_matrix(30, 1).col(0);
  RidgeModel model;
  model.lambda = 0.5;
  model.coefficients = rng.gaussian_matrix(2, 1).col(0);

  std::vector<Eigen::Index> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  Eigen::MatrixXd zp(30, 2);
  Eigen::VectorXd yp(30);
  for (Eigen::Index i = 0; i < 30; ++i) {
    zp.row(i) = z.row(perm[static_cast<size_t>(i)]);
    yp(i) = y(perm[static_cast<size_t>(i)]);
  }
  CHECK(test_risk(zp, yp, model)
        == doctest::Approx(test_risk(z, y, model)).epsilon(1e-12));
}

TEST_CASE("oversmoothing limit vanishes when the stationary feature mean is zero") {
  // Four identical latent points: uniform stationary law; alternating
  // feature signs cancel exactly, so v = Z^T dbar = 0 and the constant is 0.
  Eigen::MatrixXd latents = Eigen::MatrixXd::Zero(4, 2);
  const SmoothingOperator op = operator_for(latents, 0.1);

  LatentDataset ds;
  ds.latents = latents;
  ds.features.resize(4, 1);
  ds.features << 1.0, -1.0, 1.0, -1.0;
  ds.labels.resize(4);
  ds.labels << 2.0, 0.0, 1.0, 3.0;
  ds.n_train = 2;
  ds.n_test = 2;

  const OversmoothingLimit limit = oversmoothing_prediction(ds, op, 0.1);
  CHECK(limit.constant_label == 0.0);
  // Test labels are 1 and 3, so the limit risk is (1 + 9) / 2 = 5.
  CHECK(limit.limit_risk == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("as the penalty vanishes the constant approaches the train-label mean") {
  LatentDataset ds = tiny_dataset(12, 6, 29);
  const SmoothingOperator op = operator_for(ds.latents, 0.1);

  const double train_mean = ds.train_labels().mean();
  const OversmoothingLimit limit = oversmoothing_prediction(ds, op, 1e-12);
  CHECK(limit.constant_label == doctest::Approx(train_mean).epsilon(1e-8));

  CHECK_THROWS_AS(oversmoothing_prediction(ds, op, 0.0), Error);
}

TEST_CASE("balanced sign labels give a zero constant and unit limit risk") {
  LatentDataset ds = tiny_dataset(16, 8, 41);
  // Overwrite labels with an exactly balanced sign pattern on both splits.
  for (Eigen::Index i = 0; i < 16; ++i) {
    ds.labels(i) = (i % 2 == 0) ? 1.0 : -1.0;
  }
  const SmoothingOperator op = operator_for(ds.latents, 0.1);
  const OversmoothingLimit limit = oversmoothing_prediction(ds, op, 0.1);
  CHECK(limit.constant_label == 0.0);
  CHECK(limit.limit_risk == 1.0);
}

TEST_CASE("k_sweep validates its grid") {
  LatentDataset ds = tiny_dataset(10, 5, 3);
  const SmoothingOperator op = operator_for(ds.latents, 0.1);
  CHECK_THROWS_AS(k_sweep(ds, op, 0.1, {}), Error);
  CHECK_THROWS_AS(k_sweep(ds, op, 0.1, {1, 2}), Error);
  CHECK_THROWS_AS(k_sweep(ds, op, 0.1, {0, 2, 2}), Error);
  CHECK_THROWS_AS(k_sweep(ds, op, 0.1, {0, 3, 1}), Error);
}

TEST_CASE("constant labels with a constant feature stay fit at every order") {
  Rng rng(31);
  LatentDataset ds;
  ds.latents = rng.gaussian_matrix(14, 2);
  ds.features = Eigen::MatrixXd::Ones(14, 1);
  ds.labels = Eigen::VectorXd::Ones(14);
  ds.n_train = 7;
  ds.n_test = 7;
  const SmoothingOperator op = operator_for(ds.latents, 0.1);

  const RiskCurve curve = k_sweep(ds, op, 1e-8, {0, 1, 2, 5});
  for (double risk : curve.empirical_mean) {
    CHECK(risk <= 1e-12);
  }
  CHECK(curve.oversmoothing_level <= 1e-12);
  CHECK(curve.n_trials == 1);
  CHECK(curve.empirical_std == std::vector<double>(4, 0.0));
}

TEST_CASE("noiseless identity task is solved at k = 0 with a tiny penalty") {
  Rng rng(37);
  LatentDataset ds;
  ds.latents = rng.gaussian_matrix(60, 2);
  ds.features = ds.latents;  // identity feature map, p = d
  Eigen::VectorXd beta(2);
  beta << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  ds.labels = ds.features * beta;  // no noise
  ds.n_train = 30;
  ds.n_test = 30;
  const SmoothingOperator op = operator_for(ds.latents, 0.1);

  const RiskCurve curve = k_sweep(ds, op, 1e-8, {0, 1});
  CHECK(curve.empirical_mean[0] <= 1e-10);
  CHECK(curve.k_star_empirical == 0);
}

TEST_CASE("a deep sweep lands on the rank-one oversmoothing level") {
  LatentDataset ds = tiny_dataset(30, 15, 47);
  const SmoothingOperator op = operator_for(ds.latents, 0.1);

  const RiskCurve curve = k_sweep(ds, op, 0.1, {0, 1, 400});
  CHECK(std::abs(curve.empirical_mean.back() - curve.oversmoothing_level)
        <= 1e-8);

  // The rank-one level must also match the closed-form constant predictor.
  const OversmoothingLimit limit = oversmoothing_prediction(ds, op, 0.1);
  CHECK(curve.oversmoothing_level
        == doctest::Approx(limit.limit_risk).epsilon(1e-10));
}

TEST_CASE("k_star_empirical is the smallest minimizer over the grid") {
  LatentDataset ds = tiny_dataset(40, 20, 53);
  const SmoothingOperator op = operator_for(ds.latents, 0.1);
  const std::vector<int> ks{0, 1, 2, 3, 4};
  const RiskCurve curve = k_sweep(ds, op, 0.1, ks);

  REQUIRE(curve.empirical_mean.size() == ks.size());
  size_t best = 0;
  for (size_t i = 1; i < ks.size(); ++i) {
    if (curve.empirical_mean[i] < curve.empirical_mean[best]) {
      best = i;
    }
  }
  CHECK(curve.k_star_empirical == ks[best]);
  CHECK(validate(curve).passed());
}
