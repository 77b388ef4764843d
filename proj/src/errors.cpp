#include "apv/errors.hpp"

#include <fmt/format.h>

namespace apv {

namespace {

std::string compose(const std::string& field, const std::string& message, std::optional<int> line,
                    const std::string& source) {
    std::string prefix;
    if (!source.empty()) prefix = line ? fmt::format("{}:{}: ", source, *line) : source + ": ";
    return fmt::format("{}{}: {}", prefix, field, message);
}

}  // namespace

ValidationError::ValidationError(std::string field, const std::string& message, std::optional<int> line,
                                 std::string source)
    : Error(compose(field, message, line, source)),
      field_(std::move(field)),
      detail_(message),
      line_(line),
      source_(std::move(source)) {}

NoQuadrupoleCouplingError::NoQuadrupoleCouplingError()
    : Error("no quadrupole coupling: the quadrupole column norm vanishes for this sublevel") {}

}  // namespace apv
