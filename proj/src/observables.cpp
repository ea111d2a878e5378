#include "su2dual/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace su2dual {

double plaquette_expectation(const VecC& psi, const SpMat& HB, double beta) {
    if (!(beta > 0)) throw std::domain_error("beta must be positive");
    if (std::fabs(psi.norm() - 1.0) > 1e-10) throw std::domain_error("state is not normalised");
    if (HB.rows() != psi.size()) throw std::invalid_argument("state and H_B dimensions differ");
    const double g2 = 1.0 / (2.0 * beta);
    return g2 / (2.0 * kNumPlaquettes) * std::real(psi.dot(HB * psi));
}

double relative_energy_diff(double e_ansatz, double e_optimized) {
    if (std::fabs(e_optimized) < 1e-14) throw std::domain_error("optimised energy too close to zero");
    return (e_ansatz - e_optimized) / e_optimized;
}

double truncation_delta(double e_a, double e_b) { return std::fabs(e_a - e_b); }

MatC basis_overlap(const LocalBasis& a, const LocalBasis& b) {
    MatC g = MatC::Zero(a.size(), b.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) {
            const auto& la = a.labels[i];
            const auto& lb = b.labels[j];
            if (la.ell != lb.ell || la.m != lb.m) continue;
            const auto& ca = a.radial_of(la).coeffs;
            const auto& cb = b.radial_of(lb).coeffs;
            const auto n = std::min(ca.size(), cb.size());
            g(i, j) = ca.head(n).dot(cb.head(n));
        }
    return g;
}

namespace {

// Applies op_s (rows x dims[s]) on tensor mode s of t.
VecC apply_mode(const VecC& t, std::array<int, kSlots>& dims, int s, const MatC& op) {
    int outer = 1, inner = 1;
    for (int k = 0; k < s; ++k) outer *= dims[k];
    for (int k = s + 1; k < kSlots; ++k) inner *= dims[k];
    const int nin = dims[s], nout = static_cast<int>(op.rows());
    VecC r = VecC::Zero(static_cast<Eigen::Index>(outer) * nout * inner);
    for (int o = 0; o < outer; ++o)
        for (int i = 0; i < nout; ++i)
            for (int j = 0; j < nin; ++j) {
                const cplx w = op(i, j);
                if (w == cplx(0.0)) continue;
                const auto src = (static_cast<Eigen::Index>(o) * nin + j) * inner;
                const auto dst = (static_cast<Eigen::Index>(o) * nout + i) * inner;
                r.segment(dst, inner) += w * t.segment(src, inner);
            }
    dims[s] = nout;
    return r;
}

std::array<int, kSlots> sizes(const TableSet& t) {
    std::array<int, kSlots> d{};
    for (int s = 0; s < kSlots; ++s) d[s] = t[s]->size();
    return d;
}

int product(const std::array<int, kSlots>& d) {
    int p = 1;
    for (int x : d) p *= x;
    return p;
}

}  // namespace

double infidelity(const VecC& psi_a, const TableSet& tables_a, const VecC& psi_b, const TableSet& tables_b) {
    auto da = sizes(tables_a);
    auto db = sizes(tables_b);
    if (psi_a.size() != product(da) || psi_b.size() != product(db))
        throw std::invalid_argument("state size does not match its basis");
    VecC t = psi_b;
    for (int s = 0; s < kSlots; ++s) t = apply_mode(t, db, s, basis_overlap(tables_a[s]->basis, tables_b[s]->basis));
    const double f = std::norm(psi_a.dot(t)) / (psi_a.squaredNorm() * psi_b.squaredNorm());
    return std::clamp(1.0 - f, 0.0, 1.0);
}

VecC embed_state(const VecC& psi, const TableSet& small, const TableSet& large) {
    auto ds = sizes(small);
    auto dl = sizes(large);
    for (int s = 0; s < kSlots; ++s) {
        const auto& a = small[s]->basis;
        const auto& b = large[s]->basis;
        if (!(a.coupling == b.coupling) || a.size() > b.size())
            throw std::invalid_argument(std::string("cannot embed slot ") + slot_name(s));
        for (int i = 0; i < a.size(); ++i)
            if (!(a.labels[i] == b.labels[i]))
                throw std::invalid_argument(std::string("basis enumeration differs on slot ") + slot_name(s));
    }
    if (psi.size() != product(ds)) throw std::invalid_argument("state size does not match its basis");
    VecC t = psi;
    for (int s = 0; s < kSlots; ++s) {
        MatC pad = MatC::Zero(dl[s], ds[s]);
        pad.topLeftCorner(ds[s], ds[s]).setIdentity();
        t = apply_mode(t, ds, s, pad);
    }
    return t;
}

double frobenius_norm(const SpMat& m) {
    double s = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) s += std::norm(it.value());
    return std::sqrt(s);
}

std::array<CommutatorNorms, 2> large_loop_commutator_norms(const CouplingConfig& config, TableCache& cache) {
    const TableSet t = tables_for(config, cache);
    const DualHamiltonian h = assemble_full(config, t);
    std::array<CommutatorNorms, 2> out;
    const int slots[2] = {kLx, kLy};
    for (int k = 0; k < 2; ++k) {
        const auto e = large_loop_field(config, t, slots[k]);
        for (int a = 0; a < 3; ++a) {
            auto comm = [&](const SpMat& x) { return frobenius_norm(SpMat(x * e[a] - e[a] * x)); };
            out[k].full += comm(h.H);
            out[k].electric_local += comm(h.HEloc);
            out[k].electric_nonlocal += comm(h.HEnl);
            out[k].magnetic += comm(h.HB);
        }
    }
    return out;
}

}  // namespace su2dual
