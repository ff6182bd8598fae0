#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fbs {

// A parsed delimiter-separated numeric table, column-major. `headers` has one
// entry per column; `columns[c]` holds that column's values top to bottom.
struct NumericTable {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> columns;

    std::size_t row_count() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t column_count() const { return headers.size(); }
};

// Reads a UTF-8 table. The delimiter (comma or tab) is auto-detected from the
// header row; lines starting with `#` and blank lines are skipped. Parse
// failures report 1-based data-row and column positions.
NumericTable read_numeric_table(std::istream& in, const std::string& source_name);
NumericTable read_numeric_table(const std::filesystem::path& file);

void write_numeric_table(std::ostream& out, const NumericTable& table, char delimiter = '\t');
void write_numeric_table(const std::filesystem::path& file, const NumericTable& table, char delimiter = '\t');

// Shortest round-trip representation of a double.
std::string format_double(double value);

// Writes via a temp file in the target directory, then renames into place.
void write_file_atomic(const std::filesystem::path& file, const std::string& content);

} // namespace fbs
