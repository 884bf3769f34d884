#include "hexcirc/csv.hpp"

#include <stdexcept>

namespace hexcirc {

namespace {

void write_record(std::string& out, const std::vector<std::string>& record) {
    for (std::size_t i = 0; i < record.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += csv_escape(record[i]);
    }
    out.push_back('\n');
}

}  // namespace

std::string csv_escape(const std::string& field) {
    const bool needs_quoting =
        field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quoting) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string write_csv(const CsvTable& table) {
    std::string out;
    write_record(out, table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw std::runtime_error("write_csv: row width does not match header");
        }
        write_record(out, row);
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    const auto end_field = [&]() {
        record.push_back(field);
        field.clear();
        field_started = false;
    };
    const auto end_record = [&]() {
        end_field();
        records.push_back(record);
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty()) {
                    throw std::runtime_error("parse_csv: quote inside unquoted field");
                }
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;  // tolerate CRLF
            case '\n':
                end_record();
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw std::runtime_error("parse_csv: unterminated quoted field");
    if (field_started || !record.empty()) end_record();

    if (records.empty()) throw std::runtime_error("parse_csv: empty input");
    CsvTable table;
    table.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw std::runtime_error("parse_csv: row " + std::to_string(r) +
                                     " width does not match header");
        }
        table.rows.push_back(records[r]);
    }
    return table;
}

}  // namespace hexcirc
