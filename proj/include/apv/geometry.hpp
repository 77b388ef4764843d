#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "apv/types.hpp"

namespace apv {

/// Angular factors g(m', m) linking the S1/2 ground sublevels (columns, +1/2
/// then -1/2) to the upper D manifold (rows, m' = +J first).
///
/// Couplings are built as (global scale) x (field or gradient) x g, so every
/// column is normalized: sum over m' of |g(m', m)|^2 = 1.
struct GeometryFactors {
    Manifold lower = Manifold::S1_2;
    Manifold upper = Manifold::D3_2;
    CouplingKind kind = CouplingKind::pnc;
    std::string geometry;
    Eigen::MatrixXcd g;

    std::complex<double> at(HalfInt m_upper, HalfInt m_ground) const;

    /// Shape, manifold and normalization checks. Throws ValidationError.
    void validate(double tolerance = 1e-12) const;
};

struct GeometryPair {
    GeometryFactors pnc;
    GeometryFactors quad;
};

/// Plain-text table: `key: value` header lines (pair, kind, geometry, rows,
/// cols) followed by one line per row holding `re im` for each column.
/// Lines starting with '#' are comments.
GeometryFactors parse_geometry_table(std::istream& in, const std::string& source = "<stream>");
GeometryFactors read_geometry_table(const std::filesystem::path& path);
void write_geometry_table(std::ostream& out, const GeometryFactors& table);

}  // namespace apv
