#pragma once

#include <string>
#include <vector>

namespace qgd {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

// locale-independent numeric parse; throws with file/line context
double parse_number(const std::string& cell, const std::string& file, size_t line);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);  // round-trip precision, "nan" for undefined

}  // namespace qgd
