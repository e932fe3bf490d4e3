#pragma once

#include <stdexcept>
#include <string>

namespace normsol {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid model specification, configuration, or argument domain.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A solve or iteration failed (stall, wrong branch, bracket failure, ...).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Requested accuracy cannot be met (resolution, truncation, quadrature).
class AccuracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace normsol
