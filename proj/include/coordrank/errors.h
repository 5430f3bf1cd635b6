#pragma once

#include <stdexcept>

namespace coordrank {

// Input data that is malformed, inconsistent, or fails a join.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters or flags outside their documented domain.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coordrank
