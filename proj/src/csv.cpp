// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/csv.hpp>

#include <macrofacet/config.hpp>
#include <macrofacet/error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace macrofacet {

void CsvTable::param(const std::string& key, double value) { params.emplace_back(key, format_real(value)); }

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw ParameterDomainError("csv row has " + std::to_string(row.size()) + " values for " + std::to_string(columns.size()) +
                    " columns");
    rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
    out << "# macrofacet " << kVersion << "\n";
    for (const auto& [k, v] : params)
        out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_real(row[i]);
        out << "\n";
    }
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

void CsvTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos)
                out.params.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ','))
            cells.push_back(cell);
        if (!header) {
            out.columns = cells;
            header = true;
            continue;
        }
        if (cells.size() != out.columns.size())
            throw IoError("csv row width mismatch: '" + line + "'");
        std::vector<double> values;
        for (const std::string& c : cells) {
            double v = 0;
            if (c == "inf")
                v = kInfinity;
            else if (c == "-inf")
                v = -kInfinity;
            else {
                const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
                if (res.ec != std::errc() || res.ptr != c.data() + c.size())
                    throw IoError("csv value '" + c + "' is not a number");
            }
            values.push_back(v);
        }
        out.rows.push_back(std::move(values));
    }
    return out;
}

}  // namespace macrofacet
