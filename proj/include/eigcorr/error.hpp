#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eigcorr {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Mesh file problems. `line()` is the 1-based line in `path()`, 0 when the
/// error is not tied to a line (e.g. a missing file).
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::string path, std::size_t line)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        path_(std::move(path)), line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

private:
  std::string path_;
  std::size_t line_;
};

class MissingFileError : public ParseError {
public:
  using ParseError::ParseError;
};

class CountMismatchError : public ParseError {
public:
  using ParseError::ParseError;
};

class IndexRangeError : public ParseError {
public:
  using ParseError::ParseError;
};

class MalformedLineError : public ParseError {
public:
  using ParseError::ParseError;
};

/// Two spaces handed to a prolongation that are not nested.
class NestingViolation : public Error {
public:
  using Error::Error;
};

/// Cholesky factorization of a matrix that should be SPD failed.
class NotSpd : public Error {
public:
  using Error::Error;
};

/// x^T B x <= 0 for a vector used in a Rayleigh quotient.
class DegenerateVector : public Error {
public:
  using Error::Error;
};

/// Iterative solver hit its iteration cap.
class IterationLimit : public Error {
public:
  IterationLimit(const std::string& what, int iterations, double residual)
      : Error(what + " (iterations=" + std::to_string(iterations) +
              ", residual=" + std::to_string(residual) + ")"),
        iterations_(iterations), residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

private:
  int iterations_;
  double residual_;
};

/// The enriched function lies numerically inside the coarse space, so the
/// augmented mass matrix is singular.
class DegenerateAugmentation : public Error {
public:
  using Error::Error;
};

/// A multigrid ladder h_k = H^k that cannot be realised by regular refinement.
class UnsupportedLadder : public Error {
public:
  using Error::Error;
};

/// A computed eigenvalue fell below the exact one it must bound from above.
class MinMaxViolation : public Error {
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

} // namespace eigcorr
