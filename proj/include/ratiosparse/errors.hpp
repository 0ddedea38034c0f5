#pragma once

#include <stdexcept>

namespace ratiosparse {

// Invalid user-supplied parameter (dimensions, ranges, empty box, ...).
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// AA^T numerically singular or an expanded system is rank-deficient.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive verifiers refuse instances beyond their enumeration budget
// instead of silently approximating.
class UnsupportedSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// b = 0 and similar instances the solvers are not defined for.
class DegenerateInstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ratiosparse
