#include "apv/types.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "apv/errors.hpp"

namespace apv {

std::string HalfInt::str() const {
    if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
    return fmt::format("{}/2", twice_);
}

HalfInt HalfInt::parse(std::string_view text) {
    auto fail = [&] { return ValidationError("m", fmt::format("'{}' is not a half-integer", text)); };
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) throw fail();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        int num = 0;
        const auto num_text = text.substr(0, slash);
        const auto den_text = text.substr(slash + 1);
        auto [p, ec] = std::from_chars(num_text.data(), num_text.data() + num_text.size(), num);
        if (ec != std::errc{} || p != num_text.data() + num_text.size() || den_text != "2") throw fail();
        return from_twice(num);
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) throw fail();
    const double twice = 2.0 * v;
    if (std::abs(twice - std::round(twice)) > 1e-12) throw fail();
    return from_twice(static_cast<int>(std::lround(twice)));
}

std::string_view to_string(Manifold m) {
    switch (m) {
        case Manifold::S1_2: return "S1/2";
        case Manifold::P1_2: return "P1/2";
        case Manifold::D3_2: return "D3/2";
        case Manifold::D5_2: return "D5/2";
    }
    return "?";
}

Manifold parse_manifold(std::string_view text) {
    if (text == "S1/2") return Manifold::S1_2;
    if (text == "P1/2") return Manifold::P1_2;
    if (text == "D3/2") return Manifold::D3_2;
    if (text == "D5/2") return Manifold::D5_2;
    throw ValidationError("manifold", fmt::format("unknown manifold '{}' (expected S1/2, P1/2, D3/2 or D5/2)", text));
}

void ZeemanLevel::validate() const {
    const int twice_j = total_j(manifold).twice();
    if ((m.twice() - twice_j) % 2 != 0)
        throw ValidationError("m", fmt::format("m = {} has the wrong parity for {}", m.str(), to_string(manifold)));
    if (std::abs(m.twice()) > twice_j)
        throw ValidationError("m", fmt::format("|m| = {} exceeds J of {}", m.str(), to_string(manifold)));
}

std::string_view to_string(CouplingKind k) { return k == CouplingKind::pnc ? "pnc" : "quad"; }

CouplingKind parse_coupling_kind(std::string_view text) {
    if (text == "pnc") return CouplingKind::pnc;
    if (text == "quad") return CouplingKind::quad;
    throw ValidationError("kind", fmt::format("unknown coupling kind '{}' (expected pnc or quad)", text));
}

}  // namespace apv
