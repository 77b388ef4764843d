#pragma once

#include <complex>

#include <Eigen/Dense>

namespace apv {

enum class Placement { antinode, node };

/// One standing-wave laser: E(r) = phase * amplitude * f(k s) * polarization_axis,
/// s = standing_axis . r + offset, f = cos for antinode placement, sin for node.
struct StandingWaveField {
    double amplitude = 0.0;   // V/m
    double wavelength = 0.0;  // m
    Eigen::Vector3d polarization_axis = Eigen::Vector3d::UnitX();
    Eigen::Vector3d standing_axis = Eigen::Vector3d::UnitZ();
    Placement placement = Placement::antinode;
    double offset = 0.0;  // m, ion displacement from the ideal placement
    std::complex<double> phase{1.0, 0.0};

    double wavenumber() const;
    /// Coordinate along the standing axis, including the placement offset.
    double standing_coordinate(const Eigen::Vector3d& position) const;
    /// Signed envelope f(k s) at the ion.
    double envelope_at(const Eigen::Vector3d& position) const;

    void validate() const;
};

/// Real field vector along the polarization axis (the complex phase is kept separately).
Eigen::Vector3d field_amplitude_at(const StandingWaveField& field, const Eigen::Vector3d& position);

/// d(E . polarization)/d(standing coordinate): E0 k cos(k s) for a node-placed
/// wave, -E0 k sin(k s) for an antinode.
double field_gradient_at(const StandingWaveField& field, const Eigen::Vector3d& position);

/// E' = x E0' cos kz.
StandingWaveField antinode_pnc_field(double amplitude, double wavelength);
/// E'' = i z E0'' sin kx.
StandingWaveField node_quad_field(double amplitude, double wavelength);

}  // namespace apv
