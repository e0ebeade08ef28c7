#pragma once

#include <stdexcept>
#include <string>

namespace m3gen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: bad dimensions, unknown fields, parse failures.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters handed to an operation (bad config, empty corpus, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace m3gen
