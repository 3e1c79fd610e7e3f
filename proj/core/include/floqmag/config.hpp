#pragma once

#include <optional>
#include <string>

#include "floqmag/field.hpp"
#include "floqmag/grid.hpp"
#include "floqmag/potential.hpp"

namespace floqmag {

struct Tolerances {
    double tau_D = 1e-9;
    double gamma_min = 1e-3;
    double wronskian_tol = 1e-9;
};

// Parsed run configuration. Unknown keys anywhere in the document are
// rejected with a diagnostic naming the key and its location.
struct RunConfig {
    FieldSpec field;
    std::optional<PotentialSpec> potential;
    GridSpec grid;
    Tolerances tolerances;
    std::string output_dir = ".";

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);
    std::string to_json_text() const;  // canonical form; round-trips losslessly

    // FNV-1a 64 of the canonical serialization, hex encoded
    std::string hash() const;
};

// shortest round-trip decimal via std::to_chars
std::string format_double(double v);

}  // namespace floqmag
