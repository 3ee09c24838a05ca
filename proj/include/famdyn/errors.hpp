#pragma once

#include <stdexcept>
#include <string>

namespace famdyn {

// Arguments violate a documented precondition (bad point, bad parameter, ...).
class InvalidInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation would exceed a configured cap. The message names the cap and
// its value so callers can raise it deliberately.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace famdyn
