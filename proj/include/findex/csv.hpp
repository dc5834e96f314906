#pragma once

#include <string>
#include <vector>

namespace findex {

// Minimal CSV support for the plain numeric tables this toolkit reads and
// writes. Fields must not contain commas, quotes or newlines; the loaders
// reject quoted input rather than guessing at dialects.

using CsvRow = std::vector<std::string>;

// Reads all rows; trims trailing \r; skips fully empty lines.
std::vector<CsvRow> read_csv(const std::string& path);

// Writes rows verbatim, one line per row, '\n' line endings.
void write_csv(const std::string& path, const std::vector<CsvRow>& rows);

// Deterministic float formatting used in every emitted artifact ("%.12g").
std::string format_double(double v);

// Strict numeric parse; throws input_error on junk or trailing characters.
double parse_double(const std::string& field);

}  // namespace findex
