#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace johnell {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: wrong dimensions, negative weights, bad epsilon.
class InputError : public Error {
 public:
  using Error::Error;
};

// A Gram matrix failed the positive-definiteness pivot test.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

// A materialized Kronecker object would exceed the configured row limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual, std::size_t iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace johnell
