#include "fbs/table_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fbs/errors.hpp"

namespace fbs {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, const std::string& source, std::size_t row,
                  std::size_t column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        throw DataError(source + ": malformed number '" + cell + "' at row " + std::to_string(row) +
                        ", column " + std::to_string(column));
    }
    return value;
}

} // namespace

NumericTable read_numeric_table(std::istream& in, const std::string& source_name) {
    std::string line;
    std::string header_line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        header_line = line;
        break;
    }
    if (header_line.empty()) throw DataError(source_name + ": empty table");

    const char delimiter = header_line.find('\t') != std::string::npos ? '\t' : ',';
    NumericTable table;
    table.headers = split(header_line, delimiter);
    if (table.headers.size() < 2) {
        throw DataError(source_name + ": header must list at least two columns");
    }
    for (const auto& h : table.headers) {
        if (h.empty()) throw DataError(source_name + ": empty header cell");
    }
    table.columns.assign(table.headers.size(), {});

    std::size_t row = 0; // 1-based data rows, header excluded
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        ++row;
        const auto cells = split(line, delimiter);
        if (cells.size() != table.headers.size()) {
            throw DataError(source_name + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(table.headers.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            table.columns[c].push_back(parse_cell(cells[c], source_name, row, c + 1));
        }
    }
    if (row == 0) throw DataError(source_name + ": no data rows");
    return table;
}

NumericTable read_numeric_table(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open " + file.string());
    return read_numeric_table(in, file.string());
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) throw Error("number formatting failed");
    return std::string(buffer, ptr);
}

void write_numeric_table(std::ostream& out, const NumericTable& table, char delimiter) {
    for (std::size_t c = 0; c < table.headers.size(); ++c) {
        if (c) out << delimiter;
        out << table.headers[c];
    }
    out << '\n';
    const std::size_t rows = table.row_count();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << delimiter;
            out << format_double(table.columns[c][r]);
        }
        out << '\n';
    }
}

void write_numeric_table(const std::filesystem::path& file, const NumericTable& table,
                         char delimiter) {
    std::ostringstream out;
    write_numeric_table(out, table, delimiter);
    write_file_atomic(file, out.str());
}

void write_file_atomic(const std::filesystem::path& file, const std::string& content) {
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw DataError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError("cannot rename " + tmp.string() + " to " + file.string() + ": " +
                        ec.message());
    }
}

} // namespace fbs
