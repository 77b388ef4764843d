#include "apv/coupling.hpp"

#include <fmt/format.h>

#include "apv/errors.hpp"

namespace apv {

namespace {

void check_geometry(const IonSpecies& species, const GeometryFactors& geometry, CouplingKind kind) {
    if (geometry.kind != kind)
        throw ValidationError("geometry", fmt::format("expected a {} table, got {}", to_string(kind),
                                                      to_string(geometry.kind)));
    if (geometry.upper != species.apv_manifold)
        throw SpeciesConfigurationError(fmt::format("geometry table is for {}, species '{}' measures on {}",
                                                    to_string(geometry.upper), species.name,
                                                    to_string(species.apv_manifold)));
}

}  // namespace

Eigen::Index CouplingMatrix::column_of(HalfInt m) const {
    ZeemanLevel{Manifold::S1_2, m}.validate();
    return m == kPlusHalf ? 0 : 1;
}

Eigen::Index CouplingMatrix::row_of(HalfInt m_upper) const {
    const ZeemanLevel level{upper, m_upper};
    level.validate();
    return level.index();
}

std::complex<double> CouplingMatrix::at(HalfInt m_upper, HalfInt m_ground) const {
    return entries(row_of(m_upper), column_of(m_ground));
}

CouplingMatrix pnc_rabi_matrix(const IonSpecies& species, const StandingWaveField& field,
                               const GeometryFactors& geometry, double pnc_scale,
                               const Eigen::Vector3d& ion_position) {
    if (field.placement != Placement::antinode)
        throw ValidationError("placement", "the PNC coupling needs an antinode-placed field");
    species.apv_transition(TransitionCharacter::pnc_dipole);
    check_geometry(species, geometry, CouplingKind::pnc);
    const double e_local = field_amplitude_at(field, ion_position).dot(field.polarization_axis);
    return {CouplingKind::pnc, geometry.upper, (pnc_scale * e_local) * geometry.g};
}

CouplingMatrix quad_rabi_matrix(const IonSpecies& species, const StandingWaveField& field,
                                const GeometryFactors& geometry, double quad_scale,
                                const Eigen::Vector3d& ion_position) {
    if (field.placement != Placement::node)
        throw ValidationError("placement", "the quadrupole coupling needs a node-placed field");
    species.apv_transition(TransitionCharacter::quadrupole);
    check_geometry(species, geometry, CouplingKind::quad);
    const double gradient = field_gradient_at(field, ion_position);
    return {CouplingKind::quad, geometry.upper, (quad_scale * gradient) * geometry.g};
}

}  // namespace apv
