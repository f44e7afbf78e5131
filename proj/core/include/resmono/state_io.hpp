#pragma once

// State files and digests.
//
// A state file is a JSON object
//   {"dims": [d1, d2, ...], "cut": [i, ...], "matrix": [[re, im], ...]}
// where "matrix" lists the prod(dims)^2 entries in row-major order, each as a
// two-element array. "cut" lists the A-side factor indices and may be empty
// or absent. Writers emit exactly these three keys in this order, compact,
// numbers in shortest round-trip form, followed by a newline.

#include <string>

#include "resmono/states.hpp"

namespace resmono {

/// Throws std::invalid_argument on malformed input or an invalid state.
DensityMatrix parse_state_json(const std::string& text);
DensityMatrix read_state_file(const std::string& path);

std::string state_to_json(const DensityMatrix& rho);
void write_state_file(const std::string& path, const DensityMatrix& rho);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& bytes);

/// SHA-256 of the dims (as little-endian int32) followed by the row-major
/// entries (re, im as little-endian IEEE doubles).
std::string state_digest(const DensityMatrix& rho);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace resmono
