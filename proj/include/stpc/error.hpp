#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stpc {

// Base of every domain error raised by the library. The CLI maps the
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ColumnMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class HorizonCapExceeded : public Error {
 public:
  HorizonCapExceeded(std::size_t sequences, std::size_t cap)
      : Error("horizon cap exceeded: M^T = " + std::to_string(sequences) +
              " sequences > max_sequences = " + std::to_string(cap)),
        sequences_(sequences) {}
  std::size_t sequences() const { return sequences_; }

 private:
  std::size_t sequences_;
};

class BadDistribution : public Error {
 public:
  using Error::Error;
};

class AmbiguousBlock : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": " +
              what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownVariable : public Error {
 public:
  using Error::Error;
};

class NonBooleanVariable : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stpc
