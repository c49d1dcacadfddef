#pragma once

#include <Eigen/Dense>

#include "graphsmooth/model.hpp"

namespace graphsmooth {

/// Symmetric weighted adjacency with cached row sums.
struct Adjacency {
  Eigen::MatrixXd weights;  ///< n x n, symmetric, non-negative
  Eigen::VectorXd degrees;  ///< row sums of weights

  Eigen::Index size() const { return weights.rows(); }
};

/// Row-stochastic mean-aggregation operator L = D^{-1} A plus the
/// degree-proportional distribution d_bar = degrees / sum(degrees).  For a
/// symmetric adjacency d_bar is the stationary distribution of L.
struct SmoothingOperator {
  Eigen::MatrixXd matrix;      ///< n x n, rows sum to one
  Eigen::VectorXd stationary;  ///< length n, non-negative, sums to one

  Eigen::Index size() const { return matrix.rows(); }
};

/// Dense affinity graph on the latent points:
/// w_ij = epsilon + exp(-|x_i - x_j|^2 / 2) for every pair, including i = j,
/// so the diagonal equals epsilon + 1.  The result is exactly symmetric.
Adjacency build_adjacency(const Eigen::MatrixXd& latents,
                          const KernelConfig& kernel);

/// Divides each adjacency row by its degree.  Throws DegenerateDegreeError
/// when any degree is at or below degree_floor.
SmoothingOperator row_normalize(const Adjacency& adjacency,
                                double degree_floor = 1e-12);

/// Applies k mean-aggregation steps to a feature block: returns L^k * features
/// computed by k successive products (cost k * n^2 * p), never by forming
/// L^k.  k = 0 returns the input unchanged.
Eigen::MatrixXd smooth(const SmoothingOperator& op,
                       const Eigen::MatrixXd& features, int k);

/// The rank-one limit of L^k, factored as ones * stationary^T.
struct ErgodicLimit {
  Eigen::VectorXd ones;        ///< all-ones vector
  Eigen::VectorXd stationary;  ///< degree-proportional weights
};

ErgodicLimit ergodic_limit(const SmoothingOperator& op);

/// Distance-to-limit diagnostic for a supplied k.
struct ConvergenceCheck {
  double distance = 0.0;  ///< spectral norm of L^k - ones * stationary^T
  bool converged = false;
};

/// Measures |L^k - ones * stationary^T| in spectral norm.  L^k is formed by
/// exponentiation by squaring here -- this is a diagnostic on the operator
/// itself, not the feature-smoothing path, so the dense power is acceptable
/// and costs only log2(k) products.
ConvergenceCheck ergodic_convergence(const SmoothingOperator& op, int k,
                                     double tol = 1e-8);

/// True when the positive-weight support forms one connected component.
bool is_connected(const Eigen::MatrixXd& weights);

}  // namespace graphsmooth
