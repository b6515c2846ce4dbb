#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lassodet::csv {

/// Shortest round-trip representation; "inf", "-inf" and "nan" for non-finite.
std::string format_double(double value);

std::vector<std::string> split_line(std::string_view line);

/// Numeric table with a header row.
struct NumericTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(std::string_view name) const;  // throws ParseError if absent
};

/// Reads a headered CSV whose cells are all numeric. Blank lines are skipped.
/// Non-numeric cells raise ParseError carrying the 1-based line and column.
NumericTable read_numeric(std::istream& in);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace lassodet::csv
