#pragma once

#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>

namespace apv {

/// Half-integer angular-momentum quantum number, stored as twice its value.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr HalfInt operator-() const { return HalfInt(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
    constexpr auto operator<=>(const HalfInt&) const = default;

    /// "1/2", "-3/2", "2".
    std::string str() const;
    /// Accepts "1/2", "-3/2", "+1/2", "0", "2", "0.5", "-1.5".
    static HalfInt parse(std::string_view text);

private:
    constexpr explicit HalfInt(int twice) : twice_(twice) {}
    int twice_ = 0;
};

inline constexpr HalfInt kPlusHalf = HalfInt::from_twice(1);
inline constexpr HalfInt kMinusHalf = HalfInt::from_twice(-1);

enum class Manifold { S1_2, P1_2, D3_2, D5_2 };

constexpr HalfInt total_j(Manifold m) {
    switch (m) {
        case Manifold::S1_2:
        case Manifold::P1_2: return HalfInt::from_twice(1);
        case Manifold::D3_2: return HalfInt::from_twice(3);
        case Manifold::D5_2: return HalfInt::from_twice(5);
    }
    return HalfInt::from_twice(1);
}

constexpr int multiplicity(Manifold m) { return total_j(m).twice() + 1; }

constexpr bool is_d_manifold(Manifold m) { return m == Manifold::D3_2 || m == Manifold::D5_2; }

std::string_view to_string(Manifold m);
/// "S1/2", "P1/2", "D3/2", "D5/2".
Manifold parse_manifold(std::string_view text);

/// Sublevel of one of the manifolds that take part in the shift measurement.
struct ZeemanLevel {
    Manifold manifold;
    HalfInt m;

    /// Throws ValidationError when |m| > J or m has the wrong parity.
    void validate() const;

    /// Row (or column) index in coupling matrices: m = +J maps to 0, m = -J to 2J.
    int index() const { return (total_j(manifold) - m).twice() / 2; }
};

enum class CouplingKind { pnc, quad };

std::string_view to_string(CouplingKind k);
CouplingKind parse_coupling_kind(std::string_view text);

}  // namespace apv
