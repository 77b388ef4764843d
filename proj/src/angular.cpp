#include "apv/angular.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "apv/errors.hpp"

namespace apv {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
    const int tj1 = j1.twice(), tm1 = m1.twice(), tj2 = j2.twice(), tm2 = m2.twice();
    const int tJ = J.twice(), tM = M.twice();
    if (tm1 + tm2 != tM) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
    if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tJ + tM) % 2) return 0.0;
    if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2 || (tj1 + tj2 + tJ) % 2) return 0.0;

    // All combinations below are integers once divided by two.
    const int a = (tj1 + tj2 - tJ) / 2;
    const int b = (tj1 - tm1) / 2;
    const int c = (tj2 + tm2) / 2;
    const int d = (tJ - tj2 + tm1) / 2;
    const int e = (tJ - tj1 - tm2) / 2;

    const double prefactor =
        std::sqrt((tJ + 1) * factorial((tJ + tj1 - tj2) / 2) * factorial((tJ - tj1 + tj2) / 2) *
                  factorial(a) / factorial((tj1 + tj2 + tJ) / 2 + 1)) *
        std::sqrt(factorial((tJ + tM) / 2) * factorial((tJ - tM) / 2) * factorial((tj1 - tm1) / 2) *
                  factorial((tj1 + tm1) / 2) * factorial((tj2 - tm2) / 2) * factorial((tj2 + tm2) / 2));

    const int k_min = std::max({0, -d, -e});
    const int k_max = std::min({a, b, c});
    double sum = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        const double term = 1.0 / (factorial(k) * factorial(a - k) * factorial(b - k) *
                                   factorial(c - k) * factorial(d + k) * factorial(e + k));
        sum += (k % 2 ? -term : term);
    }
    return prefactor * sum;
}

GeometryFactors tensor_geometry(Manifold upper, CouplingKind kind, int rank,
                                std::span<const std::pair<int, double>> weights, std::string label) {
    if (!is_d_manifold(upper)) throw ValidationError("pair", "upper manifold must be D3/2 or D5/2");
    const HalfInt j_ground = total_j(Manifold::S1_2);
    const HalfInt j_upper = total_j(upper);
    const HalfInt k = HalfInt::from_twice(2 * rank);
    const int rows = multiplicity(upper);

    GeometryFactors out;
    out.upper = upper;
    out.kind = kind;
    out.geometry = std::move(label);
    out.g = Eigen::MatrixXcd::Zero(rows, 2);

    const HalfInt ground[2] = {kPlusHalf, kMinusHalf};
    for (int col = 0; col < 2; ++col) {
        for (int row = 0; row < rows; ++row) {
            const HalfInt m_upper = j_upper - HalfInt::from_twice(2 * row);
            double value = 0.0;
            for (const auto& [q, w] : weights) {
                const HalfInt hq = HalfInt::from_twice(2 * q);
                if (ground[col] + hq == m_upper)
                    value += w * clebsch_gordan(j_ground, ground[col], k, hq, j_upper, m_upper);
            }
            out.g(row, col) = value;
        }
        const double norm = out.g.col(col).norm();
        if (norm > 0.0) out.g.col(col) /= norm;
    }
    return out;
}

GeometryFactors crossed_wave_geometry(Manifold upper, CouplingKind kind) {
    // x = (T_{-1} - T_{+1}) / sqrt(2) and xz ~ (T^2_{-1} - T^2_{+1}); overall
    // factors drop out in the per-column normalization.
    static constexpr std::pair<int, double> kXLike[] = {{-1, 1.0}, {+1, -1.0}};
    static constexpr std::pair<int, double> kYLike[] = {{-1, 1.0}, {+1, 1.0}};
    if (kind == CouplingKind::quad) return tensor_geometry(upper, kind, 2, kXLike, "crossed-xz-node");
    if (upper == Manifold::D3_2) return tensor_geometry(upper, kind, 1, kXLike, "crossed-x-antinode");
    return tensor_geometry(upper, kind, 2, kYLike, "crossed-nsd-effective");
}

GeometryPair crossed_wave_geometry_pair(Manifold upper) {
    return {crossed_wave_geometry(upper, CouplingKind::pnc), crossed_wave_geometry(upper, CouplingKind::quad)};
}

}  // namespace apv
