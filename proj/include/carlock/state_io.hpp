#pragma once

#include "carlock/fock.hpp"

#include <iosfwd>
#include <string>

namespace carlock {

// State file format:
//   {"n_modes": N, "amplitudes": [{"basis": "0110", "re": x, "im": y}, ...]}
// Omitted basis strings mean amplitude 0.  The loader normalizes and throws
// StateFileError if the norm is below 1e-12, on duplicate or malformed basis
// strings, or on an out-of-range mode count.
StateVector load_state(std::istream& in);
StateVector load_state_file(const std::string& path);

std::string save_state(const StateVector& psi);
void save_state_file(const StateVector& psi, const std::string& path);

} // namespace carlock
