// Dual Hamiltonian of the 2x2 periodic lattice in the tensor-product basis of
// the five loops, ordered (W_A, W_B, W_C, L_x, L_y); slot 0 is the most
// significant Kronecker factor.
//
// H_B      = 1/(2 g^2) { Tr[4 - W_A - W_B - W_C - W_A W_B W_C] + h.c. }
// H_E,loc  = g^2 [2 E^2(A) + 3 E^2(B) + 2 E^2(C) + E^2(L_x) + E^2(L_y)]
// H_E,nloc = g^2 (15 bilinears in the loop fields, see assemble_electric_nonlocal)
#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <nlohmann/json_fwd.hpp>

#include "su2dual/operators.hpp"
#include "su2dual/table_cache.hpp"

namespace su2dual {

inline constexpr int kSlots = 5;
enum Slot : int { kWA = 0, kWB = 1, kWC = 2, kLx = 3, kLy = 4 };
const char* slot_name(int s);

using SpMat = Eigen::SparseMatrix<cplx>;
using TableSet = std::array<std::shared_ptr<const LoopOperatorTable>, kSlots>;

struct CouplingConfig {
    double beta = 1.0;
    std::array<Coupling, kSlots> locals{Coupling::electric(), Coupling::electric(), Coupling::electric(),
                                        Coupling::electric(), Coupling::electric()};
    std::array<int, kSlots> trunc{1, 1, 1, 1, 1};

    double g2() const { return 1.0 / (2.0 * beta); }
    int dimension() const;
    // Throws std::invalid_argument on beta <= 0 or a truncation < 1.
    void validate() const;
};

// (g, sqrt(3/2) g, g, inf, inf) with g^2 = 1/(2 beta).
std::array<Coupling, kSlots> initial_ansatz(double beta);

struct LedgerTerm {
    std::string name;
    std::string part;       // magnetic, electric-local, electric-nonlocal
    double coefficient;     // multiplies `scaling`
    std::string scaling;    // "1/g^2" or "g^2"
    std::vector<int> slots; // slots the term acts on
    bool hermitized;        // added as (T + T^dag)/2
};

struct DualHamiltonian {
    CouplingConfig config;
    std::array<int, kSlots> dims{};
    int dim = 0;
    SpMat H;
    SpMat HB, HEloc, HEnl;
    std::vector<LedgerTerm> ledger;
};

TableSet tables_for(const CouplingConfig& config, TableCache& cache);

// Each part is returned with its physical prefactor included.
SpMat assemble_magnetic(const CouplingConfig& config, const TableSet& t, std::vector<LedgerTerm>* ledger = nullptr);
SpMat assemble_electric_local(const CouplingConfig& config, const TableSet& t,
                              std::vector<LedgerTerm>* ledger = nullptr);
SpMat assemble_electric_nonlocal(const CouplingConfig& config, const TableSet& t,
                                 std::vector<LedgerTerm>* ledger = nullptr);

DualHamiltonian assemble_full(const CouplingConfig& config, const TableSet& t);
DualHamiltonian assemble_full(const CouplingConfig& config, TableCache& cache);

// Same Hamiltonian with every loop in the electric-limit basis.
DualHamiltonian assemble_electric_baseline(double beta, const std::array<int, kSlots>& trunc, TableCache& cache);

// Kronecker placement of per-slot factors; nullptr means identity.
using SlotFactors = std::array<const MatC*, kSlots>;
void add_kron(std::vector<Eigen::Triplet<cplx>>& out, const std::array<int, kSlots>& dims, const SlotFactors& f,
              cplx coeff);
SpMat kron_operator(const std::array<int, kSlots>& dims, const SlotFactors& f, cplx coeff = 1.0);

// The large-loop left field (E_L)^a on slot L_x or L_y, as full-space operators.
std::array<SpMat, 3> large_loop_field(const CouplingConfig& config, const TableSet& t, int slot);

nlohmann::json ledger_json(const DualHamiltonian& h);

double max_abs(const SpMat& m);
double hermiticity_defect(const SpMat& m);

}  // namespace su2dual
