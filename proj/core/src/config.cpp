#include "graphsmooth/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "graphsmooth/csv.hpp"
#include "graphsmooth/errors.hpp"

namespace graphsmooth {
namespace {

std::string trim(const std::string& s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

Eigen::MatrixXd matrix_from_json(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("invalid matrix literal '" + text + "': " + e.what());
  }
  if (!parsed.is_array() || parsed.empty() || !parsed[0].is_array()) {
    throw Error("matrix literal must be a nested list: '" + text + "'");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(parsed.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(parsed[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = parsed[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error("matrix literal is not rectangular: '" + text + "'");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& cell = row[static_cast<size_t>(j)];
      if (!cell.is_number()) {
        throw Error("matrix literal holds a non-number: '" + text + "'");
      }
      m(i, j) = cell.get<double>();
    }
  }
  return m;
}

// "eigs:[2,0.5];vecs:rot45" -> U diag(2, 0.5) U^T with U the 45-degree
// rotation.  Only the 2x2 case has an angle parameterization.
Eigen::MatrixXd matrix_from_constructor(const std::string& text) {
  const size_t semi = text.find(';');
  if (semi == std::string::npos) {
    throw Error("named matrix constructor needs 'eigs:...;vecs:...': '" +
                text + "'");
  }
  const std::string eigs_part = trim(text.substr(0, semi));
  const std::string vecs_part = trim(text.substr(semi + 1));
  if (eigs_part.rfind("eigs:", 0) != 0 || vecs_part.rfind("vecs:", 0) != 0) {
    throw Error("named matrix constructor needs 'eigs:...;vecs:...': '" +
                text + "'");
  }
  const Eigen::VectorXd eigs = parse_vector(trim(eigs_part.substr(5)));
  const std::string vecs = trim(vecs_part.substr(5));
  if (vecs.rfind("rot", 0) != 0) {
    throw Error("unsupported eigenvector spec '" + vecs + "'");
  }
  if (eigs.size() != 2) {
    throw Error("rotation eigenvector spec needs exactly two eigenvalues");
  }
  char* end = nullptr;
  const double degrees = std::strtod(vecs.c_str() + 3, &end);
  if (end == vecs.c_str() + 3 || *end != '\0') {
    throw Error("invalid rotation angle in '" + vecs + "'");
  }
  const double theta = degrees * std::numbers::pi / 180.0;
  Eigen::Matrix2d u;
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return u * eigs.asDiagonal() * u.transpose();
}

}  // namespace

KeyValueFile KeyValueFile::parse_text(const std::string& text,
                                      const std::string& origin) {
  KeyValueFile file;
  file.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ParseError(origin, line_no, "empty key");
    }
    file.entries_[key] = trim(line.substr(eq + 1));
  }
  return file;
}

KeyValueFile KeyValueFile::parse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_text(text.str(), path.string());
}

bool KeyValueFile::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const std::string& KeyValueFile::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw Error(origin_ + ": missing config key '" + key + "'");
  }
  return it->second;
}

std::string KeyValueFile::get_or(const std::string& key,
                                 const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key) const {
  const std::string& text = get(key);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw Error(origin_ + ": config key '" + key + "' is not a number: '" +
                text + "'");
  }
  return value;
}

std::int64_t KeyValueFile::get_int(const std::string& key) const {
  const std::string& text = get(key);
  char* end = nullptr;
  const std::int64_t value = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw Error(origin_ + ": config key '" + key + "' is not an integer: '" +
                text + "'");
  }
  return value;
}

std::uint64_t KeyValueFile::get_uint(const std::string& key) const {
  const std::string& text = get(key);
  char* end = nullptr;
  const std::uint64_t value = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw Error(origin_ + ": config key '" + key + "' is not an integer: '" +
                text + "'");
  }
  return value;
}

Eigen::MatrixXd parse_matrix(const std::string& raw, Eigen::Index expected_rows,
                             Eigen::Index expected_cols) {
  const std::string text = trim(raw);
  Eigen::MatrixXd m;
  if (text == "identity") {
    if (expected_rows <= 0) {
      throw Error("'identity' needs a known size");
    }
    m = Eigen::MatrixXd::Identity(expected_rows,
                                  expected_cols > 0 ? expected_cols
                                                    : expected_rows);
  } else if (text.rfind("eigs:", 0) == 0) {
    m = matrix_from_constructor(text);
  } else if (!text.empty() && text.front() == '[') {
    m = matrix_from_json(text);
  } else {
    throw Error("unrecognized matrix literal '" + text + "'");
  }
  if ((expected_rows >= 0 && m.rows() != expected_rows) ||
      (expected_cols >= 0 && m.cols() != expected_cols)) {
    std::ostringstream msg;
    msg << "matrix literal has shape " << m.rows() << "x" << m.cols()
        << ", expected " << expected_rows << "x" << expected_cols;
    throw Error(msg.str());
  }
  return m;
}

Eigen::VectorXd parse_vector(const std::string& raw, Eigen::Index expected_size) {
  const std::string text = trim(raw);
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("invalid vector literal '" + text + "': " + e.what());
  }
  if (!parsed.is_array()) {
    throw Error("vector literal must be a list: '" + text + "'");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(parsed.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& cell = parsed[static_cast<size_t>(i)];
    if (!cell.is_number()) {
      throw Error("vector literal holds a non-number: '" + text + "'");
    }
    v(i) = cell.get<double>();
  }
  if (expected_size >= 0 && v.size() != expected_size) {
    throw Error("vector literal has length " + std::to_string(v.size()) +
                ", expected " + std::to_string(expected_size));
  }
  return v;
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        out << ',';
      }
      out << format_g17(m(i, j));
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << format_g17(v(i));
  }
  out << ']';
  return out.str();
}

}  // namespace graphsmooth
