#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mladlasso/core.hpp"

namespace mladlasso::io {

/// Malformed numeric CSV; the message names the file and 1-based line.
class ParseError : public std::runtime_error
{
public:
    ParseError(std::string file, std::size_t line, const std::string& what);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Headerless comma-separated numeric matrix, '.' decimal point; blank lines
/// are ignored. `skip_header` drops the first line.
Matrix read_matrix_csv(const std::string& path, bool skip_header = false);
Matrix parse_matrix_csv(std::istream& in, const std::string& name, bool skip_header = false);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Writes one header line (if non-empty) followed by the matrix rows.
void write_matrix_csv(std::ostream& out, const Matrix& values,
                      const std::vector<std::string>& header = {});
void write_matrix_csv(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& header = {});

/// Joins fields with commas; fields are written verbatim.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace mladlasso::io
