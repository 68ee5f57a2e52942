#pragma once

#include <stdexcept>
#include <string>

namespace csippp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class InvalidShape : public Error {
public:
  using Error::Error;
};

// A sample whose energy (or a required row) is exactly zero.
class DegenerateSample : public Error {
public:
  using Error::Error;
};

// Source matrix for row orthonormalization does not have full row rank.
class DegenerateSource : public Error {
public:
  using Error::Error;
};

class DivergenceError : public Error {
public:
  DivergenceError(int iteration, const std::string& what)
      : Error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

private:
  int iteration_;
};

// Binary file format errors. Each failure mode is its own type so callers
// and tests can tell them apart.
class FormatError : public Error {
public:
  using Error::Error;
};
class BadMagic : public FormatError {
public:
  using FormatError::FormatError;
};
class TruncatedFile : public FormatError {
public:
  TruncatedFile(const std::string& what, std::size_t expected, std::size_t actual)
      : FormatError(what), expected_(expected), actual_(actual) {}
  std::size_t expected_bytes() const noexcept { return expected_; }
  std::size_t actual_bytes() const noexcept { return actual_; }

private:
  std::size_t expected_;
  std::size_t actual_;
};
class UnknownDtype : public FormatError {
public:
  using FormatError::FormatError;
};
class ChannelMismatch : public FormatError {
public:
  using FormatError::FormatError;
};
class NonFiniteWeights : public FormatError {
public:
  using FormatError::FormatError;
};
class BadActivation : public FormatError {
public:
  using FormatError::FormatError;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace csippp
