#pragma once

#include "secondchange/time_series.hpp"

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>

namespace secondchange {

/// Malformed or unusable input data. `line` is 1-based, 0 when not tied to a line.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reads one column of a CSV file with a header row. `column` is a header name
/// or a 1-based column number; empty selects the first column.
[[nodiscard]] TimeSeries ingest_csv(std::istream& in, const std::string& column = {});
[[nodiscard]] TimeSeries ingest_csv_file(const std::string& path, const std::string& column = {});

}  // namespace secondchange
