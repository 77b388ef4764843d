#include "apv/field.hpp"

#include <cmath>

#include "apv/constants.hpp"
#include "apv/errors.hpp"

namespace apv {

double StandingWaveField::wavenumber() const { return kTwoPi / wavelength; }

double StandingWaveField::standing_coordinate(const Eigen::Vector3d& position) const {
    return standing_axis.dot(position) + offset;
}

double StandingWaveField::envelope_at(const Eigen::Vector3d& position) const {
    const double phase_arg = wavenumber() * standing_coordinate(position);
    return placement == Placement::antinode ? std::cos(phase_arg) : std::sin(phase_arg);
}

void StandingWaveField::validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw ValidationError("amplitude", "must be finite and >= 0");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ValidationError("wavelength", "must be finite and strictly positive");
    if (std::abs(polarization_axis.norm() - 1.0) > 1e-12)
        throw ValidationError("polarization_axis", "must be a unit vector");
    if (std::abs(standing_axis.norm() - 1.0) > 1e-12) throw ValidationError("standing_axis", "must be a unit vector");
    if (std::abs(polarization_axis.dot(standing_axis)) > 1e-12)
        throw ValidationError("polarization_axis", "must be perpendicular to the standing axis");
    if (!std::isfinite(offset)) throw ValidationError("offset", "must be finite");
}

Eigen::Vector3d field_amplitude_at(const StandingWaveField& field, const Eigen::Vector3d& position) {
    return field.amplitude * field.envelope_at(position) * field.polarization_axis;
}

double field_gradient_at(const StandingWaveField& field, const Eigen::Vector3d& position) {
    const double k = field.wavenumber();
    const double arg = k * field.standing_coordinate(position);
    return field.placement == Placement::node ? field.amplitude * k * std::cos(arg)
                                              : -field.amplitude * k * std::sin(arg);
}

StandingWaveField antinode_pnc_field(double amplitude, double wavelength) {
    StandingWaveField f;
    f.amplitude = amplitude;
    f.wavelength = wavelength;
    f.polarization_axis = Eigen::Vector3d::UnitX();
    f.standing_axis = Eigen::Vector3d::UnitZ();
    f.placement = Placement::antinode;
    return f;
}

StandingWaveField node_quad_field(double amplitude, double wavelength) {
    StandingWaveField f;
    f.amplitude = amplitude;
    f.wavelength = wavelength;
    f.polarization_axis = Eigen::Vector3d::UnitZ();
    f.standing_axis = Eigen::Vector3d::UnitX();
    f.placement = Placement::node;
    f.phase = {0.0, 1.0};
    return f;
}

}  // namespace apv
