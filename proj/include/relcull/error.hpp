#pragma once

#include <stdexcept>
#include <string>

namespace relcull {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an input document cannot be parsed (JSON, embedding text,
/// canonical JSONL). Carries location info in the message (byte offset or
/// line number).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised when a document parses but is missing a required field or has a
/// field of the wrong type. The message names the offending field.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Raised on semantic violations: dangling ids, inconsistent vocabularies,
/// version mismatches, invalid configuration values.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace relcull
