#pragma once

#include <filesystem>
#include <string>

#include "apv/config.hpp"

namespace apv::testing {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(APV_DATA_DIR) / rel; }

inline IonSpecies ba138() { return load_species(data_path("species/ba138.yaml")); }
inline IonSpecies ra226() { return load_species(data_path("species/ra226.yaml")); }
inline IonSpecies ra227() { return load_species(data_path("species/ra227_d52.yaml")); }
inline Scenario reference_scenario() { return load_scenario(data_path("scenarios/reference.yaml")); }

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace apv::testing
