#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hbm {

/// One CSV cell, already formatted.  Numeric helpers below give the canonical
/// 17-significant-digit formatting used everywhere for reproducibility.
std::string csv_number(double v);

/// Write header + rows in RFC-4180 style (CRLF line ends, quoting only when a
/// cell contains a comma, quote, or newline).  Row order is exactly as given.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Write to path, or to stdout when path is empty.  Throws std::runtime_error
/// on an unwritable path.
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

}  // namespace hbm
