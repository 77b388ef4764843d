#include "apv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "apv/errors.hpp"

namespace apv {

namespace {

int upper_index(const GeometryFactors& t, HalfInt m_upper) {
    return (total_j(t.upper) - m_upper).twice() / 2;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::complex<double> GeometryFactors::at(HalfInt m_upper, HalfInt m_ground) const {
    ZeemanLevel{upper, m_upper}.validate();
    ZeemanLevel{lower, m_ground}.validate();
    return g(upper_index(*this, m_upper), m_ground == kPlusHalf ? 0 : 1);
}

void GeometryFactors::validate(double tolerance) const {
    if (lower != Manifold::S1_2) throw ValidationError("pair", "lower manifold must be S1/2");
    if (!is_d_manifold(upper)) throw ValidationError("pair", "upper manifold must be D3/2 or D5/2");
    if (g.rows() != multiplicity(upper) || g.cols() != 2)
        throw ValidationError("rows", fmt::format("table is {}x{}, expected {}x2 for {} <- S1/2", g.rows(),
                                                  g.cols(), multiplicity(upper), to_string(upper)));
    if (!g.allFinite()) throw ValidationError("entries", "non-finite angular factor");
    for (int col = 0; col < 2; ++col) {
        const double norm2 = g.col(col).squaredNorm();
        if (std::abs(norm2 - 1.0) > tolerance)
            throw ValidationError("entries", fmt::format("column m = {} has sum |g|^2 = {:.15g}, expected 1",
                                                         col == 0 ? "+1/2" : "-1/2", norm2));
    }
}

GeometryFactors parse_geometry_table(std::istream& in, const std::string& source) {
    std::map<std::string, std::pair<std::string, int>> header;
    std::vector<std::pair<std::vector<double>, int>> data;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (const auto colon = text.find(':'); colon != std::string::npos && data.empty()) {
            const std::string key = trim(std::string_view(text).substr(0, colon));
            static const char* const kKeys[] = {"pair", "kind", "geometry", "rows", "cols"};
            if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
                throw ValidationError(key, "unknown header field", line_no, source);
            if (header.count(key)) throw ValidationError(key, "duplicate header field", line_no, source);
            header[key] = {trim(std::string_view(text).substr(colon + 1)), line_no};
            continue;
        }
        std::istringstream row(text);
        std::vector<double> values;
        std::string token;
        while (row >> token) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw ValidationError("entries", fmt::format("'{}' is not a number", token), line_no, source);
            }
        }
        data.emplace_back(std::move(values), line_no);
    }

    auto need = [&](const char* key) -> const std::pair<std::string, int>& {
        auto it = header.find(key);
        if (it == header.end()) throw ValidationError(key, "missing header field", std::nullopt, source);
        return it->second;
    };

    GeometryFactors out;
    {
        const auto& [value, ln] = need("pair");
        const auto arrow = value.find("->");
        if (arrow == std::string::npos)
            throw ValidationError("pair", "expected '<lower> -> <upper>'", ln, source);
        try {
            out.lower = parse_manifold(trim(std::string_view(value).substr(0, arrow)));
            out.upper = parse_manifold(trim(std::string_view(value).substr(arrow + 2)));
        } catch (const ValidationError& e) {
            throw ValidationError("pair", e.detail(), ln, source);
        }
    }
    {
        const auto& [value, ln] = need("kind");
        try {
            out.kind = parse_coupling_kind(value);
        } catch (const ValidationError& e) {
            throw ValidationError("kind", e.detail(), ln, source);
        }
    }
    out.geometry = need("geometry").first;

    auto count = [&](const char* key) {
        const auto& [value, ln] = need(key);
        try {
            std::size_t used = 0;
            const int n = std::stoi(value, &used);
            if (used != value.size() || n <= 0) throw std::invalid_argument(value);
            return n;
        } catch (const std::exception&) {
            throw ValidationError(key, fmt::format("'{}' is not a positive integer", value), ln, source);
        }
    };
    const int rows = count("rows");
    const int cols = count("cols");
    if (static_cast<int>(data.size()) != rows)
        throw ValidationError("rows", fmt::format("header declares {} rows, found {}", rows, data.size()),
                              need("rows").second, source);

    out.g.resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& [values, ln] = data[r];
        if (static_cast<int>(values.size()) != 2 * cols)
            throw ValidationError("entries",
                                  fmt::format("expected {} numbers ('re im' per column), found {}", 2 * cols,
                                              values.size()),
                                  ln, source);
        for (int c = 0; c < cols; ++c) out.g(r, c) = {values[2 * c], values[2 * c + 1]};
    }

    try {
        out.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(e.field(), e.detail(), std::nullopt, source);
    }
    return out;
}

GeometryFactors read_geometry_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("geometry", "cannot open table file", std::nullopt, path.string());
    return parse_geometry_table(in, path.string());
}

void write_geometry_table(std::ostream& out, const GeometryFactors& table) {
    out << fmt::format("pair: {} -> {}\nkind: {}\ngeometry: {}\nrows: {}\ncols: {}\n", to_string(table.lower),
                       to_string(table.upper), to_string(table.kind), table.geometry, table.g.rows(),
                       table.g.cols());
    for (Eigen::Index r = 0; r < table.g.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.g.cols(); ++c)
            out << fmt::format("{}{:+.17e} {:+.17e}", c ? "  " : "", table.g(r, c).real(), table.g(r, c).imag());
        out << '\n';
    }
}

}  // namespace apv
