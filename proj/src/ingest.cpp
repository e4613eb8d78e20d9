#include "secondchange/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace secondchange {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

}  // namespace

TimeSeries ingest_csv(std::istream& in, const std::string& column) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (!have_header && std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) have_header = true;
    }
    if (!have_header) throw DataError("input is empty", 0);

    const std::vector<std::string> header = split(line);
    std::size_t col = 0;
    if (!column.empty()) {
        std::size_t number = 0;
        const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), number);
        if (ec == std::errc() && ptr == column.data() + column.size()) {
            if (number < 1 || number > header.size())
                throw DataError("column " + column + " is out of range", lineno);
            col = number - 1;
        } else {
            bool found = false;
            for (std::size_t j = 0; j < header.size(); ++j)
                if (header[j] == column) {
                    col = j;
                    found = true;
                    break;
                }
            if (!found) throw DataError("no column named '" + column + "'", lineno);
        }
    }

    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (col >= cells.size()) throw DataError("missing column" + at_line(lineno), lineno);
        const std::string& cell = cells[col];
        if (cell.empty()) throw DataError("empty cell" + at_line(lineno), lineno);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size())
            throw DataError("non-numeric value '" + cell + "'" + at_line(lineno), lineno);
        if (!std::isfinite(v)) throw DataError("non-finite value '" + cell + "'" + at_line(lineno), lineno);
        values.push_back(v);
    }
    if (values.empty()) throw DataError("input has a header but no data rows", 0);
    return TimeSeries(std::move(values));
}

TimeSeries ingest_csv_file(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path, 0);
    return ingest_csv(in, column);
}

}  // namespace secondchange
