#include "graphsmooth/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "graphsmooth/errors.hpp"

namespace graphsmooth {
namespace {

constexpr const char* kCurveHeader = "k,emp_mean,emp_std,theory,n_trials";
constexpr const char* kDiagnosticHeader = "n,sup_first_moment,sup_second_moment";

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing: " +
                  std::strerror(errno));
  }
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading: " +
                  std::strerror(errno));
  }
  return in;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

double parse_double(const std::filesystem::path& path, long line,
                    const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(path.string(), line, "not a number: '" + text + "'");
  }
  return value;
}

long parse_long(const std::filesystem::path& path, long line,
                const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(path.string(), line, "not an integer: '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_risk_curve_csv(const RiskCurve& curve,
                          const std::filesystem::path& path) {
  if (curve.empirical_mean.size() != curve.ks.size() ||
      curve.empirical_std.size() != curve.ks.size() ||
      (!curve.theory.empty() && curve.theory.size() != curve.ks.size())) {
    throw DimensionMismatchError("risk curve columns disagree in length");
  }
  std::ofstream out = open_for_write(path);
  out << kCurveHeader << '\n';
  for (size_t i = 0; i < curve.ks.size(); ++i) {
    out << curve.ks[i] << ',' << format_g17(curve.empirical_mean[i]) << ','
        << format_g17(curve.empirical_std[i]) << ',';
    if (!curve.theory.empty()) {
      out << format_g17(curve.theory[i]);
    }
    out << ',' << curve.n_trials << '\n';
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

RiskCurve read_risk_curve_csv(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line) || line != kCurveHeader) {
    throw ParseError(path.string(), 1, "expected header '" +
                     std::string(kCurveHeader) + "'");
  }
  ++line_no;
  RiskCurve curve;
  bool any_theory = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 5) {
      throw ParseError(path.string(), line_no, "expected 5 fields, got " +
                       std::to_string(f.size()));
    }
    curve.ks.push_back(static_cast<int>(parse_long(path, line_no, f[0])));
    curve.empirical_mean.push_back(parse_double(path, line_no, f[1]));
    curve.empirical_std.push_back(parse_double(path, line_no, f[2]));
    if (f[3].empty()) {
      curve.theory.push_back(0.0);
    } else {
      any_theory = true;
      curve.theory.push_back(parse_double(path, line_no, f[3]));
    }
    curve.n_trials = static_cast<int>(parse_long(path, line_no, f[4]));
  }
  if (curve.ks.empty()) {
    throw ParseError(path.string(), line_no, "no data rows");
  }
  if (!any_theory) {
    curve.theory.clear();
  }
  size_t best = 0;
  for (size_t i = 1; i < curve.empirical_mean.size(); ++i) {
    if (curve.empirical_mean[i] < curve.empirical_mean[best]) {
      best = i;
    }
  }
  curve.k_star_empirical = curve.ks[best];
  return curve;
}

void write_diagnostic_csv(const std::vector<DiagnosticRow>& rows,
                          const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << kDiagnosticHeader << '\n';
  for (const DiagnosticRow& row : rows) {
    out << row.n << ',' << format_g17(row.sup_first_moment) << ','
        << format_g17(row.sup_second_moment) << '\n';
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

std::vector<DiagnosticRow> read_diagnostic_csv(
    const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticHeader) {
    throw ParseError(path.string(), 1, "expected header '" +
                     std::string(kDiagnosticHeader) + "'");
  }
  long line_no = 1;
  std::vector<DiagnosticRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_fields(line);
    if (f.size() != 3) {
      throw ParseError(path.string(), line_no, "expected 3 fields");
    }
    DiagnosticRow row;
    row.n = parse_long(path, line_no, f[0]);
    row.sup_first_moment = parse_double(path, line_no, f[1]);
    row.sup_second_moment = parse_double(path, line_no, f[2]);
    rows.push_back(row);
  }
  return rows;
}

void write_matrix_csv(const Eigen::MatrixXd& matrix,
                      const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) {
        out << ',';
      }
      out << format_g17(matrix(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

}  // namespace graphsmooth
