#pragma once

namespace apv {

/// SI constants used throughout. Defaults are CODATA 2018; scenario files may
/// override individual values to pin a run to another adjustment.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;           // J s
    double elem_charge = 1.602176634e-19;    // C
    double bohr_radius = 5.29177210903e-11;  // m
    double bohr_magneton = 9.2740100783e-24; // J/T

    void validate() const;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Unit of the tabulated E1_PNC coefficients: i e a0 (-Q_W/N) x 1e-11.
inline constexpr double kPncAmplitudeUnitScale = 1e-11;

inline constexpr double hz_to_rad_s(double hz) { return kTwoPi * hz; }
inline constexpr double rad_s_to_hz(double w) { return w / kTwoPi; }

inline constexpr double kSecondsPerYear = 365.25 * 86400.0;

}  // namespace apv
