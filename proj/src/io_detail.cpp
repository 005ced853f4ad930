#include "ivdag/io_detail.hpp"

#include <charconv>
#include <system_error>

#include "ivdag/errors.hpp"

namespace ivdag::io_detail {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell, const std::string& file, long line) {
  if (cell.empty()) throw ParseError("empty cell in " + file, line);
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("non-numeric cell '" + cell + "' in " + file, line);
  }
  return v;
}

long parse_long(const std::string& cell, const std::string& file, long line) {
  long v = 0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("non-integer cell '" + cell + "' in " + file, line);
  }
  return v;
}

}  // namespace ivdag::io_detail
