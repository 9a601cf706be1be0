#pragma once

#include <cctype>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/core/error.hpp"

namespace fsbench {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180-ish parser: quoted fields, "" escapes, CR/LF line ends.
/// Errors carry 1-based row/column locations.
inline CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1, col = 1, field_start_col = 1;

    auto end_field = [&] {
        record.push_back(field);
        field.clear();
        field_was_quoted = false;
        field_start_col = col + 1;
    };
    auto end_record = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = record;
        } else {
            if (record.size() != table.header.size())
                throw DataError("csv row " + std::to_string(line) + ": expected " +
                                std::to_string(table.header.size()) + " fields, got " +
                                std::to_string(record.size()));
            table.rows.push_back(record);
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                    col += 2;
                } else {
                    in_quotes = false;
                    ++col;
                }
            } else {
                field += c;
                if (c == '\n') { ++line; col = 1; } else ++col;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted)
                throw DataError("csv row " + std::to_string(line) + " column " +
                                std::to_string(field_start_col) + ": stray quote");
            in_quotes = true;
            field_was_quoted = true;
            ++col;
            break;
        case ',':
            end_field();
            ++col;
            break;
        case '\r':
            ++col;
            break;
        case '\n':
            end_record();
            ++line;
            col = 1;
            field_start_col = 1;
            break;
        default:
            field += c;
            ++col;
        }
    }
    if (in_quotes)
        throw DataError("csv row " + std::to_string(line) + ": unterminated quoted field");
    if (!field.empty() || !record.empty()) end_record();
    if (table.header.empty()) throw DataError("csv: empty input");
    return table;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

inline std::string csv_quote(std::string_view field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline std::string write_csv(const CsvTable& table) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_quote(fields[i]);
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

/// Strict full-string parse; returns false on any trailing garbage.
inline bool parse_number(std::string_view s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

} // namespace fsbench
