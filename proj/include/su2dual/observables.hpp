// Ground-state observables: plaquette, energy differences, infidelity and the
// large-loop commutator diagnostics.
#pragma once

#include <array>

#include "su2dual/hamiltonian.hpp"
#include "su2dual/solver.hpp"

namespace su2dual {

inline constexpr int kNumPlaquettes = 4;

// <plaq> = g^2 / (2 N_plaq) <psi|H_B|psi>; throws std::domain_error if psi is not normalised.
double plaquette_expectation(const VecC& psi, const SpMat& HB, double beta);

// (E_ansatz - E_opt) / E_opt; throws std::domain_error when |E_opt| < 1e-14.
double relative_energy_diff(double e_ansatz, double e_optimized);

double truncation_delta(double e_a, double e_b);

// Overlap matrix <a_i|b_j> between two single-loop bases (different couplings or sizes allowed).
MatC basis_overlap(const LocalBasis& a, const LocalBasis& b);

// 1 - |<psi_a|psi_b>|^2 with the states living in the tensor products of the given bases.
double infidelity(const VecC& psi_a, const TableSet& tables_a, const VecC& psi_b, const TableSet& tables_b);

// Zero-pads a state from a smaller truncation into a larger one of the same couplings.
// Throws std::invalid_argument if the smaller basis is not a prefix of the larger.
VecC embed_state(const VecC& psi, const TableSet& small, const TableSet& large);

struct CommutatorNorms {
    // sum over a of the Frobenius norms of the commutators with (E_L)^a of the loop
    double full = 0.0;
    double electric_local = 0.0;
    double electric_nonlocal = 0.0;
    double magnetic = 0.0;
};

// Index 0 for L_x, 1 for L_y.
std::array<CommutatorNorms, 2> large_loop_commutator_norms(const CouplingConfig& config, TableCache& cache);

double frobenius_norm(const SpMat& m);

}  // namespace su2dual
