#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class DuplicateSiteError : public Error {
 public:
  DuplicateSiteError(std::size_t i, std::size_t j)
      : Error("sites " + std::to_string(i) + " and " + std::to_string(j) + " coincide"),
        first(i),
        second(j) {}
  std::size_t first;
  std::size_t second;
};

class FactorizationError : public Error {
 public:
  FactorizationError(std::size_t pivot, double value)
      : Error("symmetric factorization failed at pivot " + std::to_string(pivot)),
        pivot_index(pivot),
        pivot_value(value) {}
  std::size_t pivot_index;
  double pivot_value;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class InsufficientPointsError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// Malformed input files; carries the file name and 1-based row.
class DataError : public Error {
 public:
  DataError(const std::string& file, std::size_t row, const std::string& what)
      : Error(file + ":" + std::to_string(row) + ": " + what), path(file), line(row) {}
  std::string path;
  std::size_t line;
};

}  // namespace regs
