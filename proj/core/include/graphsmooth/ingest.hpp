#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphsmooth/model.hpp"

namespace graphsmooth {

/// How to carve an external dataset into train and test rows: either a
/// seeded random split by fraction, or an explicit file listing one training
/// node id per line (the complement becomes the test split).
struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> index_file;
};

struct LoadOptions {
  /// Duplicate same-direction edges collapse to their max by default; set to
  /// accumulate instead.
  bool sum_duplicates = false;
  /// Densifying beyond this many nodes is refused.
  Eigen::Index max_nodes = 20000;
};

/// An externally supplied attributed graph.
struct ExternalGraphDataset {
  Eigen::MatrixXd adjacency;  ///< n x n symmetric, raw (no floor applied)
  Eigen::MatrixXd features;   ///< n x p, row i belongs to node i
  Eigen::VectorXd labels;     ///< length n
  std::vector<Eigen::Index> train_ids;
  std::vector<Eigen::Index> test_ids;

  Eigen::Index size() const { return adjacency.rows(); }
};

/// Loads an edge list (`src,dst[,weight]`, 0-based ids, weight default 1, an
/// optional literal `src,dst,weight` header), a headerless numeric feature
/// CSV (row i = node i), and a one-value-per-line label file.  Labels may be
/// numbers, or class tokens which are encoded by their position in the
/// sorted list of distinct tokens (0, 1, ...).  The adjacency is symmetrized
/// with the max of the two directions.  Node count comes from the feature
/// file; edges referencing other ids raise UnknownNodeIdError, malformed
/// lines raise ParseError with their line number.
ExternalGraphDataset load_graph(const std::filesystem::path& edges_path,
                                const std::filesystem::path& features_path,
                                const std::filesystem::path& labels_path,
                                const SplitSpec& split,
                                const LoadOptions& options = {});

struct SweepOptions {
  /// Affinity floor added before normalizing: by default only as self-loops
  /// of this weight (keeps real graphs sparse in spirit); with
  /// epsilon_all_pairs it is added to every entry.
  double epsilon = 0.0;
  bool epsilon_all_pairs = false;
  /// Nodes left with zero degree get a unit self-loop (with a warning),
  /// making them fixed points of the aggregation; the strict policy rejects
  /// them instead.
  enum class IsolatedPolicy { kInjectSelfLoop, kReject };
  IsolatedPolicy isolated = IsolatedPolicy::kInjectSelfLoop;
};

/// Runs the fit/evaluate sweep over smoothing orders on an external graph,
/// same pipeline as the synthetic experiments but with the supplied
/// adjacency.  Warnings (e.g. injected self-loops) are appended to
/// *warnings when given, otherwise printed to stderr.  Throws
/// DegenerateDegreeError under the strict isolated-node policy.
RiskCurve dataset_sweep(const ExternalGraphDataset& dataset, double lambda,
                        const std::vector<int>& ks,
                        const SweepOptions& options = {},
                        std::vector<std::string>* warnings = nullptr);

}  // namespace graphsmooth
