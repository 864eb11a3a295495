#pragma once

#include <stdexcept>

namespace nrqed {

/// Thrown when a state leaves the finite range or an iteration fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nrqed
