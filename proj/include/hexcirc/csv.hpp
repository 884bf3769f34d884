#pragma once

/// @file csv.hpp
/// @brief Small CSV reader/writer with RFC-style quoting. Write and parse
/// round-trip exactly at the record level.

#include <string>
#include <vector>

namespace hexcirc {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const CsvTable& other) const {
        return header == other.header && rows == other.rows;
    }
};

/// Quotes a field when it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

std::string write_csv(const CsvTable& table);

/// Parses CSV text (first line is the header). Handles quoted fields with
/// embedded commas, quotes, and newlines. Throws std::runtime_error on
/// malformed quoting or ragged rows.
CsvTable parse_csv(const std::string& text);

}  // namespace hexcirc
