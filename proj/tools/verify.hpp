// `verify` suites: symbolic dualization, Wigner-Eckart oracle, DOF counting and
// numerical invariants. Each returns a human-readable report and JSON.
#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace su2dual::cli {

struct VerifyResult {
    bool passed = false;
    std::string text;
    nlohmann::json json;
};

// Dual Gauss laws at all four sites, with negative controls.
VerifyResult verify_gauss();
// Inverse link relations, dual field definitions, maximal tree and plaquette D.
VerifyResult verify_links();
VerifyResult verify_wigner_eckart(int samples, std::uint64_t seed, double tol);
// One lattice, or every 2 <= nx, ny <= 6 when nx == ny == 0.
VerifyResult verify_dof(int nx, int ny);
// Hermiticity, left/right Casimir equality and the large-loop commutators.
VerifyResult verify_invariants();

}  // namespace su2dual::cli
