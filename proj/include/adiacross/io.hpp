#pragma once

#include <string>
#include <vector>

namespace adiacross {

// Decimal text with at least 15 significant digits (15 fractional digits for
// |v| < 10). Magnitudes below 1e-6 or at/above 1e15 use scientific notation.
std::string format_number(double v);

// Quote a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

// Splits RFC-4180 style CSV text into rows of fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);

// Writes a whole file; throws std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace adiacross
