#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/experiments.hpp"
#include "graphsmooth/linalg.hpp"
#include "graphsmooth/theory.hpp"
#include "oracles.hpp"

using namespace graphsmooth;

namespace {

SweepSpec tiny_regression_spec() {
  SweepSpec spec = default_regression_sweep();
  spec.n = 60;
  spec.n_train = 30;
  spec.n_trials = 4;
  spec.ks = {0, 1, 2, 3};
  return spec;
}

}  // namespace

TEST_CASE("samplers are bitwise deterministic in the seed") {
  const RegressionModelConfig reg = default_regression_config();
  const LatentDataset a = sample_regression(reg, 50, 25, 7);
  const LatentDataset b = sample_regression(reg, 50, 25, 7);
  CHECK((a.latents.array() == b.latents.array()).all());
  CHECK((a.features.array() == b.features.array()).all());
  CHECK((a.labels.array() == b.labels.array()).all());

  const LatentDataset c = sample_regression(reg, 50, 25, 8);
  CHECK((a.latents - c.latents).cwiseAbs().maxCoeff() > 0.0);

  const ClassificationModelConfig cls = default_classification_config();
  const LatentDataset d = sample_classification(cls, 50, 25, 7);
  const LatentDataset e = sample_classification(cls, 50, 25, 7);
  CHECK((d.latents.array() == e.latents.array()).all());
  CHECK((d.labels.array() == e.labels.array()).all());
}

TEST_CASE("regression sampler: labels, projection identity, split bookkeeping") {
  const RegressionModelConfig config = default_regression_config();
  const LatentDataset ds = sample_regression(config, 200, 120, 11);
  CHECK(ds.size() == 200);
  CHECK(ds.n_train == 120);
  CHECK(ds.n_test == 80);
  CHECK(ds.rng_seed == 11);

  CHECK((ds.labels - ds.latents * config.coefficients).cwiseAbs().maxCoeff()
        <= 1e-12);
  CHECK((ds.features - ds.latents * config.projection).cwiseAbs().maxCoeff()
        == 0.0);

  RegressionModelConfig silent = config;
  silent.coefficients = Eigen::Vector2d::Zero();
  const LatentDataset quiet = sample_regression(silent, 40, 20, 11);
  CHECK(quiet.labels.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("regression sampler reproduces its covariance at scale") {
  const Eigen::Index n = 50000;
  RegressionModelConfig config = default_regression_config();
  const LatentDataset ds = sample_regression(config, n, n / 2, 13);
  const Eigen::MatrixXd sample_cov =
      ds.latents.transpose() * ds.latents / static_cast<double>(n);
  const double bound = 6.0 / std::sqrt(static_cast<double>(n));
  CHECK((sample_cov - config.covariance).cwiseAbs().maxCoeff() < 2.0 * bound);
  CHECK(ds.latents.colwise().mean().cwiseAbs().maxCoeff() < 2.0 * bound);
}

TEST_CASE("classification sampler: signs, balance, and conditional means") {
  const ClassificationModelConfig config = default_classification_config();
  const Eigen::Index n = 20000;
  const LatentDataset ds = sample_classification(config, n, n / 2, 17);

  Eigen::VectorXd sum_plus = Eigen::VectorXd::Zero(2);
  Eigen::Index n_plus = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = ds.labels(i);
    CHECK((y == 1.0 || y == -1.0));
    if (y > 0) {
      sum_plus += ds.latents.row(i).transpose();
      ++n_plus;
    }
  }
  const double balance_bound = 5.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(ds.labels.mean()) < balance_bound);

  const Eigen::VectorXd mean_plus = sum_plus / static_cast<double>(n_plus);
  const double mean_bound = 5.0 / std::sqrt(static_cast<double>(n_plus));
  CHECK((mean_plus - config.class_mean).cwiseAbs().maxCoeff() < mean_bound);

  CHECK((ds.features - ds.latents * config.projection).cwiseAbs().maxCoeff()
        == 0.0);
}

TEST_CASE("monte_carlo with one trial reproduces run_trial") {
  SweepSpec spec = tiny_regression_spec();
  spec.n_trials = 1;
  const MonteCarloResult result = monte_carlo(spec);

  const auto& config = std::get<RegressionModelConfig>(spec.model);
  const LatentDataset ds =
      sample_regression(config, spec.n, spec.n_train, spec.base_seed);
  const RiskCurve direct = run_trial(ds, spec.kernel, spec.lambda, spec.ks);

  REQUIRE(result.curve.size() == direct.size());
  for (size_t i = 0; i < direct.empirical_mean.size(); ++i) {
    CHECK(result.curve.empirical_mean[i]
          == doctest::Approx(direct.empirical_mean[i]).epsilon(1e-14));
    CHECK(result.curve.empirical_std[i] == 0.0);
  }
  CHECK(result.curve.n_trials == 1);
  CHECK(result.per_trial_risks.rows() == 1);
  CHECK(result.per_trial_limit.size() == 1);
}

TEST_CASE("monte_carlo output does not depend on the worker count") {
  SweepSpec one = tiny_regression_spec();
  one.jobs = 1;
  SweepSpec four = tiny_regression_spec();
  four.jobs = 4;

  const MonteCarloResult a = monte_carlo(one);
  const MonteCarloResult b = monte_carlo(four);

  CHECK(a.curve.empirical_mean == b.curve.empirical_mean);
  CHECK(a.curve.empirical_std == b.curve.empirical_std);
  CHECK(a.curve.theory == b.curve.theory);
  CHECK((a.per_trial_risks.array() == b.per_trial_risks.array()).all());
  CHECK(a.per_trial_limit == b.per_trial_limit);
  CHECK(a.interior_fraction == b.interior_fraction);
}

TEST_CASE("monte_carlo attaches the closed-form theory column for the stock family") {
  const SweepSpec spec = tiny_regression_spec();
  const MonteCarloResult result = monte_carlo(spec);

  const auto& config = std::get<RegressionModelConfig>(spec.model);
  const std::vector<double> closed =
      regression_risk_curve_d2(config, spec.lambda, 3);
  REQUIRE(result.curve.theory.size() == spec.ks.size());
  for (size_t i = 0; i < closed.size(); ++i) {
    CHECK(oracles::rel_err(result.curve.theory[i], closed[i]) < 1e-12);
  }
  CHECK(result.curve.n_trials == 4);
  CHECK(result.failures.empty());
  CHECK(result.interior_fraction >= 0.0);
  CHECK(result.interior_fraction <= 1.0);
  CHECK(validate(result.curve).passed());
}

TEST_CASE("monte_carlo validates penalties, splits, and grids upfront") {
  SweepSpec spec = tiny_regression_spec();
  spec.lambda = 0.0;
  CHECK_THROWS_AS(monte_carlo(spec), Error);

  spec = tiny_regression_spec();
  spec.n_train = spec.n;
  CHECK_THROWS_AS(monte_carlo(spec), Error);

  spec = tiny_regression_spec();
  spec.ks = {1, 2};
  CHECK_THROWS_AS(monte_carlo(spec), Error);
}

TEST_CASE("has_interior_minimum reads the curve, not wishful thinking") {
  RiskCurve curve;
  curve.ks = {0, 1, 2};
  curve.empirical_std = {0.0, 0.0, 0.0};
  curve.n_trials = 1;

  curve.empirical_mean = {1.0, 0.5, 0.7};
  curve.k_star_empirical = 1;
  CHECK(has_interior_minimum(curve));

  curve.empirical_mean = {0.5, 0.6, 0.7};
  curve.k_star_empirical = 0;
  CHECK_FALSE(has_interior_minimum(curve));

  curve.empirical_mean = {1.0, 0.9, 0.8};
  curve.k_star_empirical = 2;
  CHECK_FALSE(has_interior_minimum(curve));
}

TEST_CASE("fit_error_constant recovers a planted constant and clamps at zero") {
  const double nu = 2.0 * std::sqrt(2.0);
  const double mu = 4.0;
  const double lambda = 0.1;
  const std::vector<int> ks{0, 1, 2};

  const double planted = 0.3;
  const std::vector<double> means =
      classification_risk_curve(nu, mu, lambda, planted, 2);
  const double fitted = fit_error_constant(ks, means, nu, mu, lambda);
  CHECK(fitted == doctest::Approx(planted).epsilon(1e-10));

  // Means below the clean curve would need a negative constant: clamp to 0.
  std::vector<double> low = classification_risk_curve(nu, mu, lambda, 0.0, 2);
  for (double& value : low) {
    value *= 0.5;
  }
  CHECK(fit_error_constant(ks, low, nu, mu, lambda) == 0.0);
}

TEST_CASE("smoothing map diagnostic is deterministic and needs the floor") {
  const RegressionModelConfig reg = default_regression_config();
  const KernelConfig floored{0.1, std::nullopt};
  const std::vector<Eigen::Index> ns{100, 200, 400};

  const DiagnosticTable a = smoothing_map_diagnostic(reg, floored, ns, 5);
  const DiagnosticTable b = smoothing_map_diagnostic(reg, floored, ns, 5);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.loglog_slope == b.loglog_slope);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(a.rows[i].n == ns[i]);
    CHECK(a.rows[i].sup_first_moment == b.rows[i].sup_first_moment);
    CHECK(a.rows[i].sup_first_moment > 0.0);
    CHECK(std::isfinite(a.rows[i].sup_second_moment));
  }
  // Concentration: the gap shrinks with n, so the slope is negative.
  CHECK(a.loglog_slope < 0.0);

  const KernelConfig bare{0.0, std::nullopt};
  CHECK_THROWS_AS(smoothing_map_diagnostic(reg, bare, ns, 5),
                  DegenerateDegreeError);
  const ClassificationModelConfig cls = default_classification_config();
  CHECK_THROWS_AS(smoothing_map_diagnostic(cls, bare, ns, 5),
                  DegenerateDegreeError);
}

TEST_CASE("random moment cases stay in the calibrated eigenvalue band") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const MomentCheckCase mc = random_moment_case(3, seed);
    CHECK(mc.x.size() == 3);
    CHECK(mc.mu.size() == 3);
    for (const Eigen::MatrixXd* m : {&mc.sigma, &mc.sigma_w}) {
      CHECK(is_symmetric(*m, 1e-12));
      const SymmetricEig eig = symmetric_eig(*m);
      CHECK(eig.values.minCoeff() >= 0.5 - 1e-9);
      CHECK(eig.values.maxCoeff() <= 2.0 + 1e-9);
    }
  }
  const MomentCheckCase a = random_moment_case(3, 1);
  const MomentCheckCase b = random_moment_case(3, 2);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("Monte-Carlo moments agree with the closed form on random cases") {
  for (std::uint64_t seed : {101ULL, 102ULL}) {
    const MomentCheckCase mc = random_moment_case(3, seed);
    const KernelMoments closed =
        kernel_gaussian_moments(mc.x, mc.mu, mc.sigma, mc.sigma_w);
    const KernelMoments sampled = mc_kernel_gaussian_moments(
        mc.x, mc.mu, mc.sigma, mc.sigma_w, 200000, seed);

    CHECK(oracles::rel_err(sampled.mass, closed.mass) < 0.03);
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double gap = std::abs(sampled.first_moment(c) - closed.first_moment(c));
      CHECK(gap <= std::max(0.03 * std::abs(closed.first_moment(c)), 1e-3));
    }
  }

  // Same seed, same estimate.
  const MomentCheckCase mc = random_moment_case(3, 103);
  const KernelMoments s1 =
      mc_kernel_gaussian_moments(mc.x, mc.mu, mc.sigma, mc.sigma_w, 1000, 9);
  const KernelMoments s2 =
      mc_kernel_gaussian_moments(mc.x, mc.mu, mc.sigma, mc.sigma_w, 1000, 9);
  CHECK(s1.mass == s2.mass);
  CHECK((s1.first_moment.array() == s2.first_moment.array()).all());
}

TEST_CASE("stock sweep specs carry the documented defaults") {
  const SweepSpec reg = default_regression_sweep();
  CHECK(reg.is_regression());
  CHECK(reg.lambda == 0.1);
  CHECK(reg.n == 2000);
  CHECK(reg.n_train == 1000);
  CHECK(reg.n_trials == 20);
  CHECK(reg.kernel.epsilon == 0.0);
  CHECK(reg.base_seed == kDefaultSeed);
  REQUIRE(reg.ks.size() == 11);
  CHECK(reg.ks.front() == 0);
  CHECK(reg.ks.back() == 10);

  const SweepSpec cls = default_classification_sweep();
  CHECK_FALSE(cls.is_regression());
  REQUIRE(cls.ks.size() == 9);
  CHECK(cls.ks.back() == 8);
  const auto& config = std::get<ClassificationModelConfig>(cls.model);
  CHECK(config.class_mean.norm() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sweep spec survives the manifest round trip") {
  SweepSpec spec = tiny_regression_spec();
  spec.base_seed = 999;
  spec.kernel.epsilon = 0.05;

  const Manifest manifest = manifest_for_sweep(spec);
  const SweepSpec back = sweep_from_manifest(manifest);

  CHECK(back.is_regression());
  CHECK(back.lambda == spec.lambda);
  CHECK(back.n == spec.n);
  CHECK(back.n_train == spec.n_train);
  CHECK(back.n_trials == spec.n_trials);
  CHECK(back.ks == spec.ks);
  CHECK(back.base_seed == spec.base_seed);
  CHECK(back.kernel.epsilon == spec.kernel.epsilon);

  const auto& want = std::get<RegressionModelConfig>(spec.model);
  const auto& got = std::get<RegressionModelConfig>(back.model);
  CHECK((got.covariance.array() == want.covariance.array()).all());
  CHECK((got.coefficients.array() == want.coefficients.array()).all());
  CHECK((got.projection.array() == want.projection.array()).all());

  // Round-tripping the manifest again is the identity on its entries.
  const Manifest again = manifest_for_sweep(back);
  CHECK(again.entries() == manifest.entries());
}

TEST_CASE("classification specs round trip with and without the error constant") {
  SweepSpec spec = default_classification_sweep();
  spec.n = 80;
  spec.n_train = 40;
  spec.n_trials = 2;

  SUBCASE("fitted constant") { spec.error_constant = std::nullopt; }
  SUBCASE("pinned constant") { spec.error_constant = 0.125; }

  const SweepSpec back = sweep_from_manifest(manifest_for_sweep(spec));
  CHECK_FALSE(back.is_regression());
  CHECK(back.error_constant == spec.error_constant);
  const auto& want = std::get<ClassificationModelConfig>(spec.model);
  const auto& got = std::get<ClassificationModelConfig>(back.model);
  CHECK((got.class_mean.array() == want.class_mean.array()).all());
  CHECK((got.projection.array() == want.projection.array()).all());
}

TEST_CASE("manifests with unknown keys still load; a bad task does not") {
  Manifest manifest = manifest_for_sweep(tiny_regression_spec());
  manifest.set("future_extension", "ignored");
  CHECK_NOTHROW(sweep_from_manifest(manifest));

  manifest.set("task", "clustering");
  CHECK_THROWS_AS(sweep_from_manifest(manifest), Error);
}
