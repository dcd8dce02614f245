#include <istream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cwm/csv.hpp"
#include "cwm/error.hpp"

namespace cwm::cli {

namespace {

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

bool all_numeric(const std::vector<std::string>& cells) {
    try {
        for (const auto& c : cells) parse_real(c);
    } catch (const InputError&) {
        return false;
    }
    return true;
}

}  // namespace

Sample read_sample_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto cells = csv_split(line);
        if (first) {
            first = false;
            width = cells.size();
            if (!all_numeric(cells)) continue;  // header
        }
        if (cells.size() != width) {
            throw InputError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                             " columns, expected " + std::to_string(width));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            try {
                row.push_back(parse_real(c));
            } catch (const InputError&) {
                throw InputError("line " + std::to_string(line_no) + ": non-numeric cell '" + c + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (width != 0 && width < 2) throw DimensionError("need at least 2 columns");
    if (rows.empty()) throw InputError("no data rows");
    return Sample::from_rows(rows);
}

}  // namespace cwm::cli
