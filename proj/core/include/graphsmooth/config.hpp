#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace graphsmooth {

/// Flat `key = value` configuration file.  `#` starts a comment, blank lines
/// are skipped, keys are case-sensitive, later duplicates win.  Values keep
/// everything after the first '=' (trimmed), so list literals with commas
/// need no quoting.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::filesystem::path& path);
  static KeyValueFile parse_text(const std::string& text,
                                 const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;  // throws Error if absent
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::string origin_{"<empty>"};
  std::map<std::string, std::string> entries_;
};

/// Parses a matrix literal.  Accepted forms:
///   * row-major nested lists:  [[1.25,0.75],[0.75,1.25]]
///   * "identity"             :  identity of the expected size
///   * named constructor      :  eigs:[2,0.5];vecs:rot45
/// The constructor form builds U diag(eigs) U^T where U's columns are the
/// rotation of the standard basis by the given angle in degrees (2x2 only).
/// expected_rows/cols of -1 skip the shape check (not allowed for
/// "identity", which needs the size).
Eigen::MatrixXd parse_matrix(const std::string& text, Eigen::Index expected_rows = -1,
                             Eigen::Index expected_cols = -1);

/// Parses a vector literal: [1,2,3].  expected_size of -1 skips the check.
Eigen::VectorXd parse_vector(const std::string& text,
                             Eigen::Index expected_size = -1);

/// Serializes with 17 significant digits so parse(format(m)) == m exactly.
std::string format_matrix(const Eigen::MatrixXd& m);
std::string format_vector(const Eigen::VectorXd& v);

}  // namespace graphsmooth
