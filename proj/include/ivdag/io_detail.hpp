#pragma once

#include <string>

namespace ivdag::io_detail {

// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

// Strict double parse of a whole cell; accepts scientific notation. Throws
// ParseError naming the file and 1-based line on failure.
double parse_double(const std::string& cell, const std::string& file, long line);

long parse_long(const std::string& cell, const std::string& file, long line);

}  // namespace ivdag::io_detail
