#pragma once

#include <span>
#include <utility>

#include "apv/geometry.hpp"
#include "apv/types.hpp"

namespace apv {

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention (Racah formula).
/// Returns 0 for any combination forbidden by the triangle or projection rules.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// Angular table for a rank-k spherical tensor operator combination
/// sum_q w_q T^k_q acting from S1/2 to `upper`, each column normalized.
/// Columns with no allowed component are left at zero.
GeometryFactors tensor_geometry(Manifold upper, CouplingKind kind, int rank,
                                std::span<const std::pair<int, double>> weights, std::string label);

/// Tables for the crossed standing-wave configuration: E' polarized along x
/// (antinode, drives the PNC E1 amplitude), E'' polarized along z and varying
/// along x (node, drives the quadrupole through dEz/dx).
///
/// S1/2 -> D5/2 has no rank-1 component, so the PNC table there is an effective
/// rank-2 pattern (T_{-1} + T_{+1}) standing in for the nuclear-spin-dependent
/// amplitude; it keeps the m -> -m antisymmetry of the interference term.
GeometryFactors crossed_wave_geometry(Manifold upper, CouplingKind kind);
GeometryPair crossed_wave_geometry_pair(Manifold upper);

}  // namespace apv
