#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sputter {

// Numeric comma-separated table. '#' lines and blank lines are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers; // source line of each row, 1-based

    std::optional<std::size_t> column_index(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source = "<text>");
CsvTable read_csv(const std::filesystem::path& path);

// 17 significant digits, lossless for doubles.
std::string format_double(double v);

void write_row(std::ostream& os, std::initializer_list<double> values);
void write_row(std::ostream& os, std::span<const double> values);

} // namespace sputter
