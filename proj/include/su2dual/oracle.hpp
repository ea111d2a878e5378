// Direct Haar-measure quadrature of single-loop matrix elements, independent
// of the Wigner-Eckart assembly. Used by `verify wigner-eckart` and the tests.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "su2dual/operators.hpp"

namespace su2dual {

// Value of psi_{alpha l m}(Omega) = u(w) Y_lm / (2 sin(w/2)).
cplx basis_wavefunction(const LocalBasis& basis, int index, const AxisAngle& p);

// (E_L^a psi)(U) = i d/dt psi(e^{i t sigma^a} U), by the chain rule through the
// quaternion components of U. Exact up to rounding. The sigma (not T) keeps the
// normalisation E.E = 4 j(j+1) used by the operator tables.
cplx left_field_action(const LocalBasis& basis, int index, int a, const AxisAngle& p);
// (E_R^a psi)(U) = -i d/dt psi(U e^{i t sigma^a}).
cplx right_field_action(const LocalBasis& basis, int index, int a, const AxisAngle& p);

enum class OracleOp { ElectricLeft, ElectricRight, LoopScalar, LoopVector, Transport };
const char* oracle_op_name(OracleOp op);

// <i| O |j> by a product rule: tanh-sinh in w, Gauss-Legendre in cos(theta),
// trapezoid in phi. `a`, `b` pick components where applicable.
cplx haar_matrix_element(const LocalBasis& basis, OracleOp op, int a, int b, int i, int j, int omega_level = 7);

struct OracleSample {
    std::string coupling;
    OracleOp op = OracleOp::LoopScalar;
    int a = 0, b = 0, i = 0, j = 0;
    cplx assembled, quadrature;
    double deviation = 0.0;
};

struct OracleReport {
    std::vector<OracleSample> samples;
    double max_deviation = 0.0;
    bool passed(double tol) const { return max_deviation < tol; }
};

// Random matrix elements of E_L, E_R, S, W^a and R^{ab} over a few couplings,
// each compared with haar_matrix_element.
OracleReport wigner_eckart_oracle(int samples, std::uint64_t seed, int lmax = 6);

nlohmann::json to_json(const OracleReport& r);

}  // namespace su2dual
