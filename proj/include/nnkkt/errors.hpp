#pragma once

#include <stdexcept>
#include <string>

namespace nnkkt {

// Root of the library's error hierarchy; everything thrown on a contract
// violation or an unusable input derives from this.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

// Inverse activation queried outside the open range, or a nonpositive
// tolerance/step where a positive one is required.
struct OutOfRangeError : Error {
  using Error::Error;
};

// Uniform classification with z_max <= tol: every point is a zero-deviation
// point and the uniform condition is vacuous.
struct DegenerateProfileError : Error {
  using Error::Error;
};

struct NoWitnessError : Error {
  using Error::Error;
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

struct EmptyInputError : Error {
  using Error::Error;
};

// Feasibility phase and separation phase disagree inside the numerical band;
// callers surface this as a Degenerate verdict.
struct NotSeparableError : Error {
  using Error::Error;
};

struct IterationLimitError : Error {
  using Error::Error;
};

struct UnboundedError : Error {
  using Error::Error;
};

struct GridTooLargeError : Error {
  using Error::Error;
};

struct NoFiniteBracketError : Error {
  using Error::Error;
};

struct ActivationNotInvertibleError : Error {
  using Error::Error;
};

struct EmptyDatasetError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Malformed cell in a CSV dataset; row/column are 1-based, row 1 = header.
struct ParseError : Error {
  ParseError(const std::string& what, int row_, int col_)
      : Error(what + " (row " + std::to_string(row_) + ", column " +
              std::to_string(col_) + ")"),
        row(row_),
        col(col_) {}
  int row = 0;
  int col = 0;
};

// Structurally invalid parameter/report JSON; path points at the bad field.
struct SchemaError : Error {
  SchemaError(const std::string& what, std::string path_)
      : Error(what + " (at " + path_ + ")"), path(std::move(path_)) {}
  std::string path;
};

}  // namespace nnkkt
