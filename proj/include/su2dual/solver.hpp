// Lowest eigenpair of a Hermitian sparse matrix.
#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "su2dual/hamiltonian.hpp"

namespace su2dual {

using VecC = Eigen::VectorXcd;

struct SolverOptions {
    int dense_threshold = 4096;  // dense LAPACK below this dimension
    double tol = 1e-10;          // Lanczos residual target, relative to the spectral scale
    int krylov_dim = 120;
    int max_restarts = 200;
};

struct GroundStateResult {
    double energy = 0.0;
    VecC psi;  // unit norm, largest component real positive
    CouplingConfig config;
    double residual = 0.0;  // ||H psi - E psi||
    int iterations = 0;
    std::string method;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

GroundStateResult ground_state(const SpMat& H, const SolverOptions& opt = {});
GroundStateResult ground_state(const DualHamiltonian& H, const SolverOptions& opt = {});

// Individual back ends, exposed for cross-checks.
GroundStateResult ground_state_dense(const SpMat& H);
GroundStateResult ground_state_lanczos(const SpMat& H, const SolverOptions& opt = {});

}  // namespace su2dual
