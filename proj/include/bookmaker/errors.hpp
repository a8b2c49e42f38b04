#pragma once

#include <stdexcept>
#include <string>

namespace bookmaker {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument values: out-of-range indices, bad parameters, malformed input.
class ValueError : public Error {
 public:
  using Error::Error;
};

/// Mismatched sequence lengths or matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A metric whose defining ratio has a zero denominator (degenerate prevalence
/// or bias). Carries the measure name and the offending class, so callers can
/// report exactly which quantity is undefined instead of substituting a number.
class UndefinedMetricError : public Error {
 public:
  UndefinedMetricError(const std::string& measure, int class_index,
                       const std::string& what)
      : Error(what), measure_(measure), class_index_(class_index) {}

  const std::string& measure() const { return measure_; }
  /// Offending class, or -1 when the failure is not tied to a single class.
  int class_index() const { return class_index_; }

 private:
  std::string measure_;
  int class_index_;
};

/// Text parsing failure; row/column are 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int row = 0, int column = 0)
      : Error(what), row_(row), column_(column) {}

  int row() const { return row_; }
  int column() const { return column_; }

 private:
  int row_;
  int column_;
};

/// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bookmaker
