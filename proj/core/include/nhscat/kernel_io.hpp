#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "nhscat/kernel.hpp"

namespace nhscat {

// Kernel files are JSON objects:
//
//   {"type": "sampled", "d": 1, "n": N, "is_local": false,
//    "values": [[re, im], ...]}            N*N row-major, or N when local
//   {"type": "polynomial", "d": 1, "imax": I, "jmax": J,
//    "coeffs": [[re, im], ...]}            (I+1)*(J+1) row-major
//   {"type": "inverse_square", "d": 1, "alpha": a, "epsilon": e,
//    "mirrored": false}                    mirrored is optional
//
// Doubles are written in shortest round-trip form, so write/read is exact.

nlohmann::json kernel_to_json(const PotentialKernel& kernel);

/// Throws InputError naming the offending field.
PotentialKernel kernel_from_json(const nlohmann::json& j);

/// Throws InputError with the parser's line/column on malformed JSON.
PotentialKernel parse_kernel(const std::string& text);

PotentialKernel read_kernel_file(const std::filesystem::path& path);
void write_kernel_file(const std::filesystem::path& path, const PotentialKernel& kernel);

nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace nhscat
