#pragma once

#include <Eigen/Dense>

#include "apv/field.hpp"
#include "apv/geometry.hpp"
#include "apv/species.hpp"
#include "apv/types.hpp"

namespace apv {

/// Complex Rabi frequencies (rad/s) between the S1/2 sublevels (columns,
/// +1/2 then -1/2) and an upper D manifold (rows, m' = +J first).
struct CouplingMatrix {
    CouplingKind kind = CouplingKind::pnc;
    Manifold upper = Manifold::D3_2;
    Eigen::MatrixXcd entries;

    Eigen::Index column_of(HalfInt m) const;
    Eigen::Index row_of(HalfInt m_upper) const;
    std::complex<double> at(HalfInt m_upper, HalfInt m_ground) const;
};

/// Omega^PNC = pnc_scale x E'(ion) x g. The field must be antinode-placed and
/// the species must carry an S1/2 -> upper pnc-dipole transition.
CouplingMatrix pnc_rabi_matrix(const IonSpecies& species, const StandingWaveField& field,
                               const GeometryFactors& geometry, double pnc_scale,
                               const Eigen::Vector3d& ion_position = Eigen::Vector3d::Zero());

/// Omega^quad = quad_scale x dE''/dx(ion) x g. The field must be node-placed.
CouplingMatrix quad_rabi_matrix(const IonSpecies& species, const StandingWaveField& field,
                                const GeometryFactors& geometry, double quad_scale,
                                const Eigen::Vector3d& ion_position = Eigen::Vector3d::Zero());

}  // namespace apv
