#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ssinfer {

/// Formats a double so that it round-trips exactly (shortest of %.17g).
std::string format_double(double v);

/// Writes "header\nrow,row,...\n" with LF endings and round-trip doubles.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const Eigen::MatrixXd& rows);

/// Splits one CSV line on commas. No quoting support; the toolkit's formats
/// never emit quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads a numeric CSV with a header row.
std::pair<std::vector<std::string>, Eigen::MatrixXd> read_csv_file(const std::string& path);

/// Extracts one column by header name from a parsed CSV.
Eigen::VectorXd csv_column(const std::pair<std::vector<std::string>, Eigen::MatrixXd>& table,
                           const std::string& name);

}  // namespace ssinfer
