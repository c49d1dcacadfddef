#include "graphsmooth/ingest.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "graphsmooth/errors.hpp"
#include "graphsmooth/graph.hpp"
#include "graphsmooth/learn.hpp"
#include "graphsmooth/rng.hpp"

namespace graphsmooth {
namespace {

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return in;
}

std::string strip(const std::string& s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(strip(field));
  }
  return fields;
}

double to_double(const std::filesystem::path& path, long line,
                 const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(path.string(), line, "not a number: '" + text + "'");
  }
  return value;
}

Eigen::Index to_node_id(const std::filesystem::path& path, long line,
                        const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long long value = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(path.string(), line, "not a node id: '" + text + "'");
  }
  return static_cast<Eigen::Index>(value);
}

Eigen::MatrixXd read_feature_csv(const std::filesystem::path& path,
                                 Eigen::Index max_nodes) {
  std::ifstream in = open_text(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) {
      row.push_back(to_double(path, line_no, f));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path.string(), line_no,
                       "row width differs from the first row");
    }
    rows.push_back(std::move(row));
    if (static_cast<Eigen::Index>(rows.size()) > max_nodes) {
      throw Error("feature file exceeds the dense cap of " +
                  std::to_string(max_nodes) + " nodes");
    }
  }
  if (rows.empty()) {
    throw ParseError(path.string(), line_no, "no feature rows");
  }
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      features(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return features;
}

// Labels are numbers when every line parses as one; otherwise distinct
// tokens are sorted and encoded by rank, a deterministic declared encoding.
Eigen::VectorXd read_label_csv(const std::filesystem::path& path,
                               Eigen::Index expected_n) {
  std::ifstream in = open_text(path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const std::string value = strip(line);
    if (!value.empty()) {
      tokens.push_back(value);
    }
  }
  if (static_cast<Eigen::Index>(tokens.size()) != expected_n) {
    throw DimensionMismatchError(
        "label file '" + path.string() + "' has " +
        std::to_string(tokens.size()) + " values for " +
        std::to_string(expected_n) + " nodes");
  }
  Eigen::VectorXd labels(expected_n);
  bool all_numeric = true;
  for (Eigen::Index i = 0; i < expected_n; ++i) {
    char* end = nullptr;
    const std::string& t = tokens[static_cast<size_t>(i)];
    labels(i) = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    return labels;
  }
  std::vector<std::string> distinct = tokens;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  std::map<std::string, double> code;
  for (size_t i = 0; i < distinct.size(); ++i) {
    code[distinct[i]] = static_cast<double>(i);
  }
  for (Eigen::Index i = 0; i < expected_n; ++i) {
    labels(i) = code[tokens[static_cast<size_t>(i)]];
  }
  return labels;
}

void read_edges_into(const std::filesystem::path& path, Eigen::Index n,
                     bool sum_duplicates, Eigen::MatrixXd* weights) {
  std::ifstream in = open_text(path);
  std::string line;
  long line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = strip(line);
    if (text.empty()) {
      continue;
    }
    if (first && (text == "src,dst,weight" || text == "src,dst")) {
      first = false;  // tolerate a literal header line
      continue;
    }
    first = false;
    const std::vector<std::string> fields = split_csv(text);
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(path.string(), line_no,
                       "expected 'src,dst[,weight]', got " +
                       std::to_string(fields.size()) + " fields");
    }
    const Eigen::Index src = to_node_id(path, line_no, fields[0]);
    const Eigen::Index dst = to_node_id(path, line_no, fields[1]);
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      throw UnknownNodeIdError(path.string() + ":" + std::to_string(line_no) +
                               ": edge references node " +
                               std::to_string(src < 0 || src >= n ? src : dst) +
                               " outside 0.." + std::to_string(n - 1));
    }
    double weight = 1.0;
    if (fields.size() == 3) {
      weight = to_double(path, line_no, fields[2]);
      if (weight < 0.0) {
        throw ParseError(path.string(), line_no, "negative edge weight");
      }
    }
    double& cell = (*weights)(src, dst);
    cell = sum_duplicates ? cell + weight : std::max(cell, weight);
  }
}

std::vector<Eigen::Index> read_index_file(const std::filesystem::path& path,
                                          Eigen::Index n) {
  std::ifstream in = open_text(path);
  std::vector<Eigen::Index> ids;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = strip(line);
    if (text.empty()) {
      continue;
    }
    const Eigen::Index id = to_node_id(path, line_no, text);
    if (id < 0 || id >= n) {
      throw UnknownNodeIdError(path.string() + ":" + std::to_string(line_no) +
                               ": split index " + std::to_string(id) +
                               " outside 0.." + std::to_string(n - 1));
    }
    if (seen[static_cast<size_t>(id)]) {
      throw ParseError(path.string(), line_no,
                       "duplicate split index " + std::to_string(id));
    }
    seen[static_cast<size_t>(id)] = 1;
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

ExternalGraphDataset load_graph(const std::filesystem::path& edges_path,
                                const std::filesystem::path& features_path,
                                const std::filesystem::path& labels_path,
                                const SplitSpec& split,
                                const LoadOptions& options) {
  ExternalGraphDataset dataset;
  dataset.features = read_feature_csv(features_path, options.max_nodes);
  const Eigen::Index n = dataset.features.rows();
  dataset.labels = read_label_csv(labels_path, n);

  Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(n, n);
  read_edges_into(edges_path, n, options.sum_duplicates, &directed);
  dataset.adjacency = directed.cwiseMax(directed.transpose());

  if (split.index_file.has_value()) {
    dataset.train_ids = read_index_file(*split.index_file, n);
    std::vector<char> in_train(static_cast<size_t>(n), 0);
    for (Eigen::Index id : dataset.train_ids) {
      in_train[static_cast<size_t>(id)] = 1;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!in_train[static_cast<size_t>(i)]) {
        dataset.test_ids.push_back(i);
      }
    }
  } else {
    if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
      throw Error("train_fraction must lie strictly between 0 and 1");
    }
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      order[static_cast<size_t>(i)] = i;
    }
    Rng rng(split.seed);
    // Fisher-Yates on the node order, then cut at the requested fraction.
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const Eigen::Index j = static_cast<Eigen::Index>(
          rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    Eigen::Index n_train = static_cast<Eigen::Index>(
        split.train_fraction * static_cast<double>(n));
    n_train = std::clamp<Eigen::Index>(n_train, 1, n - 1);
    dataset.train_ids.assign(order.begin(), order.begin() + n_train);
    dataset.test_ids.assign(order.begin() + n_train, order.end());
    std::sort(dataset.train_ids.begin(), dataset.train_ids.end());
    std::sort(dataset.test_ids.begin(), dataset.test_ids.end());
  }
  if (dataset.train_ids.empty() || dataset.test_ids.empty()) {
    throw Error("the split must leave both train and test non-empty");
  }
  return dataset;
}

RiskCurve dataset_sweep(const ExternalGraphDataset& dataset, double lambda,
                        const std::vector<int>& ks,
                        const SweepOptions& options,
                        std::vector<std::string>* warnings) {
  const Eigen::Index n = dataset.size();
  if (dataset.features.rows() != n || dataset.labels.size() != n) {
    throw DimensionMismatchError("dataset parts disagree in node count");
  }
  if (options.epsilon < 0.0) {
    throw Error("epsilon must be >= 0");
  }
  Eigen::MatrixXd weights = dataset.adjacency;
  if (options.epsilon > 0.0) {
    if (options.epsilon_all_pairs) {
      weights.array() += options.epsilon;
    } else {
      weights.diagonal().array() += options.epsilon;
    }
  }

  constexpr double kDegreeFloor = 1e-12;
  Eigen::VectorXd degrees = weights.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (degrees(i) <= kDegreeFloor) {
      if (options.isolated == SweepOptions::IsolatedPolicy::kReject) {
        throw DegenerateDegreeError("node " + std::to_string(i) +
                                    " is isolated and no augmentation was "
                                    "requested");
      }
      weights(i, i) += 1.0;  // unit self-loop keeps the node a fixed point
      const std::string note =
          "injected a unit self-loop at isolated node " + std::to_string(i);
      if (warnings != nullptr) {
        warnings->push_back(note);
      } else {
        std::cerr << "warning: " << note << '\n';
      }
    }
  }
  Adjacency adjacency;
  adjacency.weights = std::move(weights);
  adjacency.degrees = adjacency.weights.rowwise().sum();
  const SmoothingOperator op = row_normalize(adjacency);
  return sweep_with_split(op, dataset.features, dataset.labels,
                          dataset.train_ids, dataset.test_ids, lambda, ks);
}

}  // namespace graphsmooth
