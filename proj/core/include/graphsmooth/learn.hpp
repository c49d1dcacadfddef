#pragma once

#include <vector>

#include <Eigen/Dense>

#include "graphsmooth/graph.hpp"
#include "graphsmooth/model.hpp"

namespace graphsmooth {

/// Ridge regression on already-smoothed features:
///   beta = (Z^T Z / n + lambda I)^{-1} Z^T y / n,
/// computed with a Cholesky solve of the SPD normal matrix, never by an
/// explicit inverse.  smoothing_order is carried through into the model.
RidgeModel ridge_fit(const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels, double lambda,
                     int smoothing_order = 0);

/// Mean squared prediction error |y - Z beta|^2 / n on held-out data.
double test_risk(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                 const RidgeModel& model);

/// Closed-form endpoint of infinite smoothing: every prediction collapses to
/// the same constant.
struct OversmoothingLimit {
  double constant_label = 0.0;  ///< c = |v|^2 / (lambda + |v|^2) * mean(y_train)
  double limit_risk = 0.0;      ///< test MSE of the constant prediction
};

/// Evaluates the collapse constant from v = Z^T d_bar and the training label
/// mean, plus the risk the constant incurs on the test split.
OversmoothingLimit oversmoothing_prediction(const LatentDataset& dataset,
                                            const SmoothingOperator& op,
                                            double lambda);

/// Fit/evaluate across smoothing orders with an explicit train/test split
/// given as row index sets.  Features are smoothed incrementally: one
/// aggregation step per order, reusing the previous block.  ks must be
/// strictly increasing and start at 0.  The returned curve's
/// oversmoothing_level comes from fitting on the rank-one block
/// ones * (d_bar^T Z) through the same fit/evaluate path.
RiskCurve sweep_with_split(const SmoothingOperator& op,
                           const Eigen::MatrixXd& features,
                           const Eigen::VectorXd& labels,
                           const std::vector<Eigen::Index>& train_ids,
                           const std::vector<Eigen::Index>& test_ids,
                           double lambda, const std::vector<int>& ks);

/// Sweep for a sampled dataset, whose training rows are by construction the
/// first n_train.  At k = 0 this runs the identical code path as calling
/// ridge_fit / test_risk directly on the unsmoothed features.
RiskCurve k_sweep(const LatentDataset& dataset, const SmoothingOperator& op,
                  double lambda, const std::vector<int>& ks);

}  // namespace graphsmooth
