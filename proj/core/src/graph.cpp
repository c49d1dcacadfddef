#include "graphsmooth/graph.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/linalg.hpp"

namespace graphsmooth {
namespace {

// L^k by exponentiation by squaring; used only for diagnostics on the
// operator, never for smoothing features.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int k) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd base = m;
  int e = k;
  while (e > 0) {
    if (e & 1) {
      result = result * base;
    }
    e >>= 1;
    if (e > 0) {
      base = base * base;
    }
  }
  return result;
}

}  // namespace

Adjacency build_adjacency(const Eigen::MatrixXd& latents,
                          const KernelConfig& kernel) {
  if (!(kernel.epsilon >= 0.0)) {
    throw Error("kernel epsilon must be >= 0");
  }
  const Eigen::Index n = latents.rows();
  if (n < 2) {
    throw DimensionMismatchError("need at least two points to build a graph");
  }
  Adjacency adj;
  adj.weights.resize(n, n);
  // Fill the lower triangle and mirror so symmetry is exact in floating
  // point, not just up to rounding.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d2 = (latents.row(i) - latents.row(j)).squaredNorm();
      const double w = kernel.epsilon + std::exp(-0.5 * d2);
      adj.weights(i, j) = w;
      adj.weights(j, i) = w;
    }
  }
  adj.degrees = adj.weights.rowwise().sum();
  return adj;
}

SmoothingOperator row_normalize(const Adjacency& adjacency,
                                double degree_floor) {
  const Eigen::Index n = adjacency.size();
  if (adjacency.degrees.size() != n) {
    throw DimensionMismatchError("adjacency degrees not in sync with weights");
  }
  Eigen::Index worst = 0;
  const double dmin = adjacency.degrees.minCoeff(&worst);
  if (dmin <= degree_floor) {
    throw DegenerateDegreeError("degree " + std::to_string(dmin) +
                                " at node " + std::to_string(worst) +
                                " is at or below the floor " +
                                std::to_string(degree_floor));
  }
  SmoothingOperator op;
  op.matrix = adjacency.degrees.cwiseInverse().asDiagonal() * adjacency.weights;
  op.stationary = adjacency.degrees / adjacency.degrees.sum();
  return op;
}

Eigen::MatrixXd smooth(const SmoothingOperator& op,
                       const Eigen::MatrixXd& features, int k) {
  if (k < 0) {
    throw Error("smoothing order k must be >= 0");
  }
  if (features.rows() != op.size()) {
    throw DimensionMismatchError("feature rows do not match operator size");
  }
  Eigen::MatrixXd out = features;
  for (int step = 0; step < k; ++step) {
    out = op.matrix * out;
  }
  return out;
}

ErgodicLimit ergodic_limit(const SmoothingOperator& op) {
  return ErgodicLimit{Eigen::VectorXd::Ones(op.size()), op.stationary};
}

ConvergenceCheck ergodic_convergence(const SmoothingOperator& op, int k,
                                     double tol) {
  if (k < 0) {
    throw Error("smoothing order k must be >= 0");
  }
  const ErgodicLimit limit = ergodic_limit(op);
  const Eigen::MatrixXd powered = matrix_power(op.matrix, k);
  ConvergenceCheck check;
  check.distance = spectral_norm(
      powered - limit.ones * limit.stationary.transpose());
  check.converged = check.distance <= tol;
  return check;
}

bool is_connected(const Eigen::MatrixXd& weights) {
  const Eigen::Index n = weights.rows();
  if (n == 0) {
    return false;
  }
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  Eigen::Index visited = 1;
  while (!stack.empty()) {
    const Eigen::Index u = stack.back();
    stack.pop_back();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!seen[static_cast<size_t>(v)] && weights(u, v) > 0.0) {
        seen[static_cast<size_t>(v)] = 1;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

}  // namespace graphsmooth
