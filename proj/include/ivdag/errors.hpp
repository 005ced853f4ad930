#pragma once

#include <stdexcept>
#include <string>

#include "ivdag/matrix.hpp"

namespace ivdag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or structurally malformed arguments.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// File contents that do not conform to a documented format. `line` is
// 1-based; 0 means the error is not tied to a specific line.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Omega estimation requires regime k for every node k in 1..p.
class MissingRegimeError : public Error {
 public:
  explicit MissingRegimeError(int regime)
      : Error("no data regime for intervention " + std::to_string(regime) +
              "; omega entry for its target is unidentified"),
        regime_(regime) {}
  int regime() const { return regime_; }

 private:
  int regime_;
};

// Constant columns, empty regimes, and similar degenerate samples.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// The profile likelihood degenerates when a residual column is exactly zero.
class SingularProfileError : public Error {
 public:
  explicit SingularProfileError(int column)
      : Error("residual column " + std::to_string(column + 1) +
              " has zero norm; profile likelihood is singular"),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

// Cross-validation cannot stratify a regime smaller than the fold count.
class StratificationError : public Error {
 public:
  using Error::Error;
};

// The optimizer hit a non-finite objective; carries the last finite iterate.
class DivergedError : public Error {
 public:
  DivergedError(const std::string& msg, Matrix last_iterate)
      : Error(msg), last_iterate_(std::move(last_iterate)) {}
  const Matrix& last_iterate() const { return last_iterate_; }

 private:
  Matrix last_iterate_;
};

}  // namespace ivdag
