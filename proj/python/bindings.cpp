#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>

#include "su2dual/dualizer.hpp"
#include "su2dual/observables.hpp"
#include "su2dual/oracle.hpp"
#include "su2dual/variational.hpp"

namespace py = pybind11;
using namespace su2dual;

namespace {

// Python side: a float for finite g, None or math.inf for the electric limit.
Coupling to_coupling(const std::optional<double>& g) {
    if (!g || std::isinf(*g)) return Coupling::electric();
    return Coupling::finite(*g);
}

std::optional<double> from_coupling(const Coupling& c) {
    if (c.is_electric()) return std::nullopt;
    return c.g();
}

Locals to_locals(const std::vector<std::optional<double>>& g) {
    if (g.size() != kSlots) throw std::invalid_argument("expected five couplings (W_A, W_B, W_C, L_x, L_y)");
    Locals l = initial_ansatz(1.0);
    for (int s = 0; s < kSlots; ++s) l[s] = to_coupling(g[s]);
    return l;
}

std::vector<std::optional<double>> from_locals(const Locals& l) {
    std::vector<std::optional<double>> out;
    for (const auto& c : l) out.push_back(from_coupling(c));
    return out;
}

TableCache& shared_cache() {
    static TableCache c(cache_dir_from_env());
    return c;
}

py::dict point_dict(const SweepPoint& p) {
    py::dict d;
    d["beta"] = p.beta;
    d["mode"] = mode_name(p.mode);
    d["truncation"] = p.trunc;
    d["ok"] = p.ok;
    d["error"] = p.error;
    d["energy"] = p.energy;
    d["plaquette"] = p.plaquette;
    d["couplings"] = from_locals(p.locals);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SU(2) lattice gauge theory on the 2x2 torus in the dual loop basis";

    // group
    m.def("clebsch_gordan", &clebsch_gordan, py::arg("l1"), py::arg("m1"), py::arg("l2"), py::arg("m2"),
          py::arg("L"), py::arg("M"));
    m.def("spherical_harmonic", &spherical_harmonic, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"));
    m.def(
        "haar_weight", [](double w, double t, double p) { return haar_weight({w, t, p}); }, py::arg("omega"),
        py::arg("theta"), py::arg("phi"));

    // radial problem and local basis
    m.def(
        "radial_levels",
        [](int ell, std::optional<double> g, int count) {
            std::vector<double> e;
            for (const auto& r : solve_radial(ell, to_coupling(g), count)) e.push_back(r.epsilon_tilde);
            return e;
        },
        py::arg("ell"), py::arg("g") = py::none(), py::arg("count") = 6,
        "Lowest radial eigenvalues at fixed ell; g=None is the electric limit.");
    m.def(
        "basis_labels",
        [](std::optional<double> g, int lmax) {
            const auto b = build_local_basis(to_coupling(g), lmax);
            py::list out;
            for (int i = 0; i < b.size(); ++i)
                out.append(py::make_tuple(b.labels[i].alpha, b.labels[i].ell, b.labels[i].m, b.eps[i]));
            return out;
        },
        py::arg("g"), py::arg("lmax"), "(alpha, ell, m, epsilon) for each state of the truncated basis.");
    m.def(
        "operator_table",
        [](std::optional<double> g, int lmax) {
            const auto t = shared_cache().get(to_coupling(g), lmax);
            py::dict d;
            d["S"] = t->S;
            d["casimir"] = t->casimir;
            d["EL"] = std::vector<MatC>(t->EL.begin(), t->EL.end());
            d["ER"] = std::vector<MatC>(t->ER.begin(), t->ER.end());
            d["W"] = std::vector<MatC>(t->W.begin(), t->W.end());
            return d;
        },
        py::arg("g"), py::arg("lmax"), "Single-loop operator matrices.");

    // Hamiltonian and ground state
    m.def("initial_ansatz", [](double beta) { return from_locals(initial_ansatz(beta)); }, py::arg("beta"));
    m.def(
        "hamiltonian",
        [](double beta, const std::vector<std::optional<double>>& g, const std::array<int, kSlots>& trunc) {
            CouplingConfig c;
            c.beta = beta;
            c.locals = to_locals(g);
            c.trunc = trunc;
            return assemble_full(c, shared_cache()).H;
        },
        py::arg("beta"), py::arg("couplings"), py::arg("truncation"), "Sparse dual Hamiltonian (scipy.sparse).");
    m.def(
        "ground_state",
        [](double beta, const std::vector<std::optional<double>>& g, const std::array<int, kSlots>& trunc) {
            CouplingConfig c;
            c.beta = beta;
            c.locals = to_locals(g);
            c.trunc = trunc;
            py::gil_scoped_release release;
            const auto h = assemble_full(c, shared_cache());
            const auto gs = ground_state(h);
            const double plaq = plaquette_expectation(gs.psi, h.HB, beta);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["energy"] = gs.energy;
            d["plaquette"] = plaq;
            d["psi"] = gs.psi;
            d["residual"] = gs.residual;
            d["method"] = gs.method;
            return d;
        },
        py::arg("beta"), py::arg("couplings"), py::arg("truncation"));
    m.def(
        "optimize",
        [](double beta, const std::array<int, kSlots>& trunc, int max_cycles, std::uint64_t seed) {
            OptimizerOptions o;
            o.max_cycles = max_cycles;
            o.seed = seed;
            OptimizationTrace tr;
            {
                py::gil_scoped_release release;
                tr = optimize_couplings(beta, trunc, o, shared_cache());
            }
            py::dict d;
            d["e_initial"] = tr.e_initial;
            d["e_final"] = tr.e_final;
            d["couplings"] = from_locals(tr.final);
            d["converged"] = tr.converged;
            d["evaluations"] = tr.evaluations;
            d["loop_plateau"] = tr.loop_plateau;
            return d;
        },
        py::arg("beta"), py::arg("truncation"), py::arg("max_cycles") = 6, py::arg("seed") = 0,
        "Two-phase coupling optimisation starting from the initial ansatz.");
    m.def(
        "sweep",
        [](const std::vector<double>& betas, const std::vector<Truncation>& truncs, const std::vector<std::string>& modes,
           int workers) {
            std::vector<SweepMode> ms;
            for (const auto& s : modes) ms.push_back(parse_mode(s));
            SweepOptions o;
            o.workers = workers;
            std::vector<SweepPoint> pts;
            {
                py::gil_scoped_release release;
                pts = sweep(betas, truncs, ms, o, shared_cache());
            }
            py::list out;
            for (const auto& p : pts) out.append(point_dict(p));
            return out;
        },
        py::arg("betas"), py::arg("truncations"), py::arg("modes") = std::vector<std::string>{"variational"},
        py::arg("workers") = 1);
    m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("n"));

    // checks
    m.def(
        "wigner_eckart_max_deviation",
        [](int samples, std::uint64_t seed) { return wigner_eckart_oracle(samples, seed).max_deviation; },
        py::arg("samples") = 50, py::arg("seed") = 1);
    m.def(
        "torus_dof",
        [](int nx, int ny) {
            const auto c = symbolic::torus_dof_count(nx, ny);
            return py::make_tuple(c.loops, c.strings);
        },
        py::arg("nx"), py::arg("ny"), "(loops, strings) left after dualizing an nx x ny torus.");
    m.def("gauss_laws_reduce", [] {
        return symbolic::verify_gauss_laws(symbolic::dualize_minimal_torus()).all_reduced;
    });
}
