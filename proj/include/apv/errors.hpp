#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace apv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input value or file violates a type invariant or schema rule.
///
/// Carries the offending field name and, for file input, the source line so
/// the CLI can print `file:line: field: message` diagnostics.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message,
                    std::optional<int> line = std::nullopt, std::string source = {});

    const std::string& field() const noexcept { return field_; }
    std::optional<int> line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string field_;
    std::string detail_;
    std::optional<int> line_;
    std::string source_;
};

/// The species record lacks something an operation needs (e.g. a transition).
class SpeciesConfigurationError : public Error {
public:
    using Error::Error;
};

/// The interference shift is singular: the quadrupole column norm vanishes for the requested m.
class NoQuadrupoleCouplingError : public Error {
public:
    NoQuadrupoleCouplingError();
};

/// A formula was evaluated at a singular point (zero detuning, zero overlap).
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration (grids too small, zero trials, ...).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Every block of a Monte Carlo run fell outside the invertible fringe range.
class EstimatorError : public Error {
public:
    using Error::Error;
};

}  // namespace apv
