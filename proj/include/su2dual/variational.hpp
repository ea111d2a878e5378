// Energy functional E(beta, g_I) and the two-phase coupling optimisation.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "su2dual/hamiltonian.hpp"
#include "su2dual/solver.hpp"

namespace su2dual {

using Truncation = std::array<int, kSlots>;
using Locals = std::array<Coupling, kSlots>;

GroundStateResult solve_config(const CouplingConfig& config, TableCache& cache, const SolverOptions& sopt = {});
double energy_functional(double beta, const Locals& locals, const Truncation& trunc, TableCache& cache,
                         const SolverOptions& sopt = {});

struct OptimizerOptions {
    double energy_tol = 1e-4;     // relative energy change between cycles
    double coupling_tol = 1e-3;   // relative coupling change between cycles
    int max_cycles = 6;
    int max_evals_per_phase = 300;
    double simplex_step = 0.3;    // initial simplex edge in log g
    double nm_ftol = 1e-10;       // inner Nelder-Mead stopping rules
    double nm_xtol = 1e-5;
    double plaquette_range = 100.0;  // plaquette g_i kept in [g / range, g * range]
    double loop_min_factor = 1.0;    // large-loop g searched in [min, max] * g
    double loop_max_factor = 1e3;
    int restarts = 1;
    std::uint64_t seed = 0;
};

struct Iterate {
    int phase = 0;  // 1 plaquettes, 2 large loops
    std::array<double, kSlots> g{};  // +inf marks the electric limit
    double energy = 0.0;
};

struct OptimizationTrace {
    double beta = 0.0;
    Truncation trunc{};
    Locals initial = initial_ansatz(1.0);
    Locals final = initial_ansatz(1.0);
    double e_initial = 0.0;
    double e_final = 0.0;
    std::vector<Iterate> iterates;  // accepted points, energies non-increasing
    bool converged = false;
    int cycles = 0;
    int evaluations = 0;
    // max relative deviation of E over g_4 = g_5 in {10, 100, 1000} g from the final energy
    double loop_plateau = 0.0;
    std::string warning;
};

OptimizationTrace optimize_couplings(double beta, const Truncation& trunc, const OptimizerOptions& opt,
                                     TableCache& cache, const SolverOptions& sopt = {});

// Bounded Nelder-Mead on a box; exposed for tests.
struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const std::vector<double>& lo, const std::vector<double>& hi, double step, double ftol,
                             double xtol, int max_evals,
                             const std::function<void(const std::vector<double>&, double)>& on_improve = {});

enum class SweepMode { Ansatz, Variational, ElectricBaseline };
const char* mode_name(SweepMode m);
SweepMode parse_mode(const std::string& s);

struct SweepPoint {
    double beta = 0.0;
    SweepMode mode = SweepMode::Ansatz;
    Truncation trunc{};
    bool ok = false;
    std::string error;
    double energy = 0.0;
    double plaquette = 0.0;
    Locals locals = initial_ansatz(1.0);
    int iterations = 0;
    GroundStateResult ground;
    std::optional<OptimizationTrace> trace;
};

struct SweepOptions {
    OptimizerOptions optimizer;
    SolverOptions solver;
    int workers = 0;  // 0: hardware concurrency
};

// One point per (beta, truncation, mode); results are ordered as the loops nest,
// independent of scheduling.
std::vector<SweepPoint> sweep(const std::vector<double>& betas, const std::vector<Truncation>& truncations,
                              const std::vector<SweepMode>& modes, const SweepOptions& opt, TableCache& cache);

SweepPoint run_point(double beta, const Truncation& trunc, SweepMode mode, const SweepOptions& opt,
                     TableCache& cache);

std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace su2dual
