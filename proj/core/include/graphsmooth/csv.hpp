#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphsmooth/model.hpp"

namespace graphsmooth {

/// One row of a smoothing-map discrepancy table: the worst-case gap between
/// one empirical aggregation step and its population limit, at sample size n.
struct DiagnosticRow {
  Eigen::Index n = 0;
  double sup_first_moment = 0.0;
  double sup_second_moment = 0.0;
};

/// Decimal form with 17 significant digits (printf %.17g), enough to
/// round-trip a double exactly; used for every number this library writes.
std::string format_g17(double value);

/// Writes `k,emp_mean,emp_std,theory,n_trials` rows.  The theory cell is
/// empty when the curve carries no closed-form column.  Files end with a
/// trailing newline and are silently overwritten.  Throws IoError with the
/// path in the message when the file cannot be written.
void write_risk_curve_csv(const RiskCurve& curve,
                          const std::filesystem::path& path);

/// Reads a file produced by write_risk_curve_csv.  Numbers round-trip
/// exactly.  k_star_empirical is recomputed from the mean column;
/// oversmoothing_level is not stored in the CSV and is left at zero.
RiskCurve read_risk_curve_csv(const std::filesystem::path& path);

/// Writes `n,sup_first_moment,sup_second_moment` rows.
void write_diagnostic_csv(const std::vector<DiagnosticRow>& rows,
                          const std::filesystem::path& path);

std::vector<DiagnosticRow> read_diagnostic_csv(
    const std::filesystem::path& path);

/// Dumps a dense matrix row-major, one comma-separated line per row.
void write_matrix_csv(const Eigen::MatrixXd& matrix,
                      const std::filesystem::path& path);

}  // namespace graphsmooth
