#pragma once

#include <cmath>
#include <stdexcept>

namespace nrqed {

/// Physical constants in Gaussian units. Defaults are Hartree atomic units
/// for an electron: hbar = m = 1, e = -1, c = 137.036.
struct Constants {
  double hbar = 1.0;
  double mass = 1.0;
  double charge = -1.0;  // sign included
  double c = 137.036;

  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0) || !(c > 0.0))
      throw std::invalid_argument("hbar, mass and c must be positive");
    if (!std::isfinite(charge)) throw std::invalid_argument("charge must be finite");
  }

  Constants with_charge(double e) const {
    Constants k = *this;
    k.charge = e;
    return k;
  }
};

}  // namespace nrqed
