#include "mladlasso/csv.hpp"

#include <array>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace mladlasso::io {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
      file_(std::move(file)), line_(line)
{
}

Matrix parse_matrix_csv(std::istream& in, const std::string& name, bool skip_header)
{
    std::vector<double> values;
    Index columns = -1;
    Index rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_header && line_no == 1) {
            continue;
        }
        if (trim(line).empty()) {
            continue;
        }
        Index fields = 0;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            const std::string_view field = trim(rest.substr(0, comma));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
                throw ParseError(name, line_no,
                                 "field " + std::to_string(fields + 1) + " is not a number: '" +
                                     std::string(field) + "'");
            }
            if (!std::isfinite(v)) {
                throw ParseError(name, line_no,
                                 "field " + std::to_string(fields + 1) + " is not finite");
            }
            values.push_back(v);
            ++fields;
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (columns < 0) {
            columns = fields;
        } else if (fields != columns) {
            throw ParseError(name, line_no,
                             "expected " + std::to_string(columns) + " fields, found " +
                                 std::to_string(fields));
        }
        ++rows;
    }
    if (rows == 0) {
        throw ParseError(name, line_no, "no data rows");
    }
    return Eigen::Map<const Matrix>(values.data(), rows, columns);
}

Matrix read_matrix_csv(const std::string& path, bool skip_header)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open file");
    }
    return parse_matrix_csv(in, path, skip_header);
}

std::string format_double(double value)
{
    std::array<char, 32> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc()) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buffer.data(), ptr);
}

std::string csv_line(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k > 0) {
            out += ',';
        }
        out += fields[k];
    }
    return out;
}

void write_matrix_csv(std::ostream& out, const Matrix& values,
                      const std::vector<std::string>& header)
{
    if (!header.empty()) {
        out << csv_line(header) << '\n';
    }
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(values(i, j));
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& header)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    write_matrix_csv(out, values, header);
}

}  // namespace mladlasso::io
