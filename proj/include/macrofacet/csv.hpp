// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace macrofacet {

inline constexpr const char* kVersion = "0.1.0";

// Numeric table written as CSV: '#' comment lines (tool version, seed and
// every parameter), one header row "name [unit]", then rows of reals with 17
// significant digits. Separator ',', LF line endings.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
    void param(const std::string& key, double value);
    void add_row(std::vector<double> row);

    void write(std::ostream& out) const;
    std::string str() const;
    // Throws IoError with the path.
    void save(const std::string& path) const;
};

struct ParsedCsv {
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Reads what CsvTable::write produces. Throws IoError on malformed input.
ParsedCsv parse_csv(const std::string& text);

}  // namespace macrofacet
