#include "apv/constants.hpp"

#include <cmath>

#include "apv/errors.hpp"

namespace apv {

void PhysicalConstants::validate() const {
    auto check = [](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(name, "must be finite and strictly positive");
    };
    check("hbar", hbar);
    check("elem_charge", elem_charge);
    check("bohr_radius", bohr_radius);
    check("bohr_magneton", bohr_magneton);
}

}  // namespace apv
