#pragma once

#include <stdexcept>
#include <string>

namespace gencalc {

/// Raised when a computation fails for numerical reasons (a quadrature that
/// does not converge, a missed eigenvalue bracket, an integrator blow-up).
/// Invalid inputs are reported with std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gencalc
