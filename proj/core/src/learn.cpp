#include "graphsmooth/learn.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "graphsmooth/errors.hpp"

namespace graphsmooth {
namespace {

void check_ks(const std::vector<int>& ks) {
  if (ks.empty()) {
    throw Error("ks must not be empty");
  }
  if (ks.front() != 0) {
    throw Error("ks must start at 0");
  }
  for (size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) {
      throw Error("ks must be strictly increasing");
    }
  }
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m,
                            const std::vector<Eigen::Index>& ids) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), m.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(ids[i]);
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v,
                       const std::vector<Eigen::Index>& ids) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(ids.size()));
  for (size_t i = 0; i < ids.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(ids[i]);
  }
  return out;
}

std::vector<Eigen::Index> iota_ids(Eigen::Index begin, Eigen::Index end) {
  std::vector<Eigen::Index> ids(static_cast<size_t>(end - begin));
  std::iota(ids.begin(), ids.end(), begin);
  return ids;
}

// Smallest k attaining the minimum of the mean column.
int smallest_minimizer(const std::vector<int>& ks,
                       const std::vector<double>& risks) {
  size_t best = 0;
  for (size_t i = 1; i < risks.size(); ++i) {
    if (risks[i] < risks[best]) {
      best = i;
    }
  }
  return ks[best];
}

}  // namespace

RidgeModel ridge_fit(const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels, double lambda,
                     int smoothing_order) {
  if (!(lambda > 0.0)) {
    throw Error("ridge penalty lambda must be > 0");
  }
  const Eigen::Index n = features.rows();
  if (labels.size() != n) {
    throw DimensionMismatchError("labels length does not match feature rows");
  }
  if (n == 0) {
    throw DimensionMismatchError("cannot fit on an empty split");
  }
  const Eigen::Index p = features.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::MatrixXd normal =
      features.transpose() * features * inv_n +
      lambda * Eigen::MatrixXd::Identity(p, p);
  const Eigen::VectorXd rhs = features.transpose() * labels * inv_n;

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw SolveError("Cholesky factorization of the ridge normal matrix "
                     "failed (lambda = " + std::to_string(lambda) + ")");
  }
  RidgeModel model;
  model.lambda = lambda;
  model.coefficients = llt.solve(rhs);
  model.smoothing_order = smoothing_order;
  if (!model.coefficients.allFinite()) {
    throw SolveError("ridge solve produced non-finite coefficients");
  }
  return model;
}

double test_risk(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                 const RidgeModel& model) {
  if (features.cols() != model.coefficients.size()) {
    throw DimensionMismatchError(
        "feature width does not match model coefficients");
  }
  if (features.rows() != labels.size() || features.rows() == 0) {
    throw DimensionMismatchError("test split is empty or inconsistent");
  }
  const Eigen::VectorXd residual = labels - features * model.coefficients;
  return residual.squaredNorm() / static_cast<double>(features.rows());
}

OversmoothingLimit oversmoothing_prediction(const LatentDataset& dataset,
                                            const SmoothingOperator& op,
                                            double lambda) {
  if (!(lambda > 0.0)) {
    throw Error("ridge penalty lambda must be > 0");
  }
  if (op.size() != dataset.size()) {
    throw DimensionMismatchError("operator size does not match dataset");
  }
  const Eigen::VectorXd v = dataset.features.transpose() * op.stationary;
  const double v2 = v.squaredNorm();
  const double train_mean = dataset.train_labels().mean();

  OversmoothingLimit limit;
  limit.constant_label = v2 / (lambda + v2) * train_mean;
  limit.limit_risk =
      (dataset.test_labels().array() - limit.constant_label).square().mean();
  return limit;
}

RiskCurve sweep_with_split(const SmoothingOperator& op,
                           const Eigen::MatrixXd& features,
                           const Eigen::VectorXd& labels,
                           const std::vector<Eigen::Index>& train_ids,
                           const std::vector<Eigen::Index>& test_ids,
                           double lambda, const std::vector<int>& ks) {
  check_ks(ks);
  if (train_ids.empty() || test_ids.empty()) {
    throw DimensionMismatchError("both splits must be non-empty");
  }
  if (features.rows() != op.size() || labels.size() != op.size()) {
    throw DimensionMismatchError("features/labels do not match operator size");
  }

  const Eigen::VectorXd train_labels = gather(labels, train_ids);
  const Eigen::VectorXd test_labels = gather(labels, test_ids);

  RiskCurve curve;
  curve.ks = ks;
  curve.empirical_mean.reserve(ks.size());

  // One aggregation step per order; evaluate whenever the current order is
  // requested.  This costs ks.back() * n^2 * p regardless of how sparse ks is.
  Eigen::MatrixXd block = features;
  size_t next = 0;
  for (int k = 0; k <= ks.back(); ++k) {
    if (k > 0) {
      block = op.matrix * block;
    }
    if (next < ks.size() && ks[next] == k) {
      const RidgeModel model =
          ridge_fit(gather_rows(block, train_ids), train_labels, lambda, k);
      curve.empirical_mean.push_back(
          test_risk(gather_rows(block, test_ids), test_labels, model));
      ++next;
    }
  }
  curve.empirical_std.assign(ks.size(), 0.0);
  curve.k_star_empirical = smallest_minimizer(ks, curve.empirical_mean);
  curve.n_trials = 1;

  // Endpoint of the sweep: fit on the rank-one block ones * (d_bar^T Z),
  // which is what L^k Z converges to.  Same fit/evaluate path as above.
  const Eigen::VectorXd v = features.transpose() * op.stationary;
  const Eigen::MatrixXd collapsed =
      Eigen::VectorXd::Ones(features.rows()) * v.transpose();
  const RidgeModel limit_model =
      ridge_fit(gather_rows(collapsed, train_ids), train_labels, lambda, -1);
  curve.oversmoothing_level =
      test_risk(gather_rows(collapsed, test_ids), test_labels, limit_model);
  return curve;
}

RiskCurve k_sweep(const LatentDataset& dataset, const SmoothingOperator& op,
                  double lambda, const std::vector<int>& ks) {
  return sweep_with_split(op, dataset.features, dataset.labels,
                          iota_ids(0, dataset.n_train),
                          iota_ids(dataset.n_train, dataset.size()), lambda,
                          ks);
}

}  // namespace graphsmooth
