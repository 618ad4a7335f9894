#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morpho {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable or malformed input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; carries the byte offset where decoding stopped.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed input that cannot be processed, e.g. a single training class (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of a tree, table or model was found broken (exit code 4).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace morpho
