#pragma once

#include <stdexcept>
#include <string>

namespace qtube {

// Malformed or unusable input data (bad CSV, dimension mismatch, degenerate sample).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The LP core returned something other than an optimum where one was required.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtube
