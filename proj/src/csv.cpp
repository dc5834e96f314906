#include "findex/csv.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "findex/errors.hpp"

namespace findex {

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::vector<CsvRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.find('"') != std::string::npos)
            throw input_error("quoted CSV fields are not supported: " + path);
        CsvRow row;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) row.push_back(field);
        if (!line.empty() && line.back() == ',') row.push_back("");
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path);
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw input_error("write failed: " + path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_double(const std::string& field) {
    if (field.empty()) throw input_error("empty numeric field");
    // strtod would silently skip leading whitespace
    if (std::isspace(static_cast<unsigned char>(field.front())))
        throw input_error("not a number: '" + field + "'");
    const char* begin = field.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + field.size())
        throw input_error("not a number: '" + field + "'");
    return v;
}

}  // namespace findex
