#include <doctest.h>

#include <cmath>
#include <random>

#include "su2dual/observables.hpp"
#include "su2dual/quadrature.hpp"
#include "su2dual/variational.hpp"

using namespace su2dual;

namespace {

TableCache& cache() {
    static TableCache c;
    return c;
}

CouplingConfig config(double beta, const Locals& l, const Truncation& t) {
    CouplingConfig c;
    c.beta = beta;
    c.locals = l;
    c.trunc = t;
    return c;
}

// Dense Kronecker product of the five single-loop overlap matrices.
MatC full_overlap(const TableSet& a, const TableSet& b) {
    MatC g = MatC::Ones(1, 1);
    for (int s = 0; s < kSlots; ++s) {
        const MatC o = basis_overlap(a[s]->basis, b[s]->basis);
        MatC k(g.rows() * o.rows(), g.cols() * o.cols());
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) k.block(i * o.rows(), j * o.cols(), o.rows(), o.cols()) = g(i, j) * o;
        g = k;
    }
    return g;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("plaquette of the strong-coupling vacuum is 1") {
    Locals electric = initial_ansatz(0.01);
    electric.fill(Coupling::electric());
    const auto h = assemble_full(config(0.01, electric, {1, 1, 1, 1, 1}), cache());
    VecC psi = VecC::Ones(1);
    CHECK(plaquette_expectation(psi, h.HB, 0.01) == doctest::Approx(1.0).epsilon(1e-12));

    const auto h4 = assemble_full(config(0.01, initial_ansatz(0.01), {4, 4, 4, 1, 1}), cache());
    const auto gs = ground_state(h4);
    CHECK(std::abs(plaquette_expectation(gs.psi, h4.HB, 0.01) - 1.0) < 1e-3);
}

TEST_CASE("plaquette input checks") {
    const auto h = assemble_full(config(1.0, initial_ansatz(1.0), {2, 1, 1, 1, 1}), cache());
    VecC psi = VecC::Zero(2);
    psi(0) = 2.0;
    CHECK_THROWS_AS(plaquette_expectation(psi, h.HB, 1.0), std::domain_error);
    psi(0) = 1.0;
    CHECK_THROWS_AS(plaquette_expectation(psi, h.HB, 0.0), std::domain_error);
    CHECK_THROWS_AS(plaquette_expectation(VecC::Ones(1), h.HB, 1.0), std::invalid_argument);
}

TEST_CASE("relative energy difference") {
    CHECK(relative_energy_diff(2.0, 2.0) == 0.0);
    CHECK(relative_energy_diff(2.2, 2.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(relative_energy_diff(1.0, 0.0), std::domain_error);
    CHECK(truncation_delta(1.5, 2.0) == 0.5);
    CHECK(truncation_delta(2.0, 1.5) == 0.5);
}

TEST_CASE("basis overlap matches direct quadrature") {
    const auto a = build_local_basis(Coupling::finite(0.7), 9);
    const auto b = build_local_basis(Coupling::finite(1.9), 6);
    const MatC g = basis_overlap(a, b);
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < b.size(); ++j) {
            const auto& la = a.labels[i];
            const auto& lb = b.labels[j];
            double expect = 0.0;
            if (la.ell == lb.ell && la.m == lb.m) {
                const auto& ra = a.radial_of(la);
                const auto& rb = b.radial_of(lb);
                expect = tanh_sinh_integrate([&](double w) { return ra.u(w) * rb.u(w); }, 0.0, 2 * kPi, 1e-13);
            }
            CHECK(std::abs(g(i, j) - expect) < 1e-10);
        }
    const MatC self = basis_overlap(a, a);
    CHECK((self - MatC::Identity(a.size(), a.size())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("infidelity") {
    const double beta = 1.0;
    const auto ca = config(beta, initial_ansatz(beta), {3, 3, 3, 1, 1});
    Locals other = initial_ansatz(beta);
    other[kWA] = Coupling::finite(1.4 * other[kWA].g());
    other[kLx] = Coupling::finite(2.0);
    const auto cb = config(beta, other, {3, 2, 3, 2, 1});
    const auto ta = tables_for(ca, cache());
    const auto tb = tables_for(cb, cache());
    const auto a = ground_state(assemble_full(ca, ta));
    const auto b = ground_state(assemble_full(cb, tb));

    CHECK(infidelity(a.psi, ta, a.psi, ta) < 1e-12);
    const double f = infidelity(a.psi, ta, b.psi, tb);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    const double expect = 1.0 - std::norm(a.psi.dot(full_overlap(ta, tb) * b.psi));
    CHECK(f == doctest::Approx(expect).epsilon(1e-10).scale(1e-12));
    CHECK(infidelity(b.psi, tb, a.psi, ta) == doctest::Approx(f).epsilon(1e-10).scale(1e-12));
    CHECK_THROWS_AS(infidelity(a.psi, tb, b.psi, tb), std::invalid_argument);

    // random states in the same basis
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    for (int k = 0; k < 5; ++k) {
        VecC x(a.psi.size()), y(a.psi.size());
        for (int i = 0; i < x.size(); ++i) {
            x(i) = cplx(n(rng), n(rng));
            y(i) = cplx(n(rng), n(rng));
        }
        const double v = infidelity(x, ta, y, ta);
        CHECK(v == doctest::Approx(1.0 - std::norm(x.dot(y)) / (x.squaredNorm() * y.squaredNorm())).epsilon(1e-12));
    }
}

TEST_CASE("embedding into a larger truncation") {
    const double beta = 1.5;
    const auto cs = config(beta, initial_ansatz(beta), {2, 2, 2, 1, 1});
    const auto cl = config(beta, initial_ansatz(beta), {4, 3, 4, 2, 1});
    const auto ts = tables_for(cs, cache());
    const auto tl = tables_for(cl, cache());
    const auto hs = assemble_full(cs, ts);
    const auto hl = assemble_full(cl, tl);
    const auto gs = ground_state(hs);
    const VecC e = embed_state(gs.psi, ts, tl);
    REQUIRE(e.size() == hl.dim);
    CHECK(e.norm() == doctest::Approx(1.0));
    // H restricted to the prefix basis is the small Hamiltonian.
    CHECK(std::real(e.dot(hl.H * e)) == doctest::Approx(gs.energy).epsilon(1e-12));
    CHECK(infidelity(e, tl, gs.psi, ts) < 1e-12);

    const auto other = config(beta, initial_ansatz(2 * beta), {2, 2, 2, 1, 1});
    CHECK_THROWS_AS(embed_state(gs.psi, tables_for(other, cache()), tl), std::invalid_argument);
    CHECK_THROWS_AS(embed_state(e, tl, ts), std::invalid_argument);
}

TEST_CASE("large-loop fields commute with the local and magnetic parts") {
    for (double beta : {0.2, 1.0, 5.0}) {
        // Winding loops in the electric basis: a finite-g truncation would not be closed under E_L.
        const auto c = config(beta, initial_ansatz(beta), {2, 2, 2, 2, 2});
        const auto n = large_loop_commutator_norms(c, cache());
        for (const auto& k : n) {
            CHECK(k.electric_local < 1e-8);
            CHECK(k.magnetic < 1e-8);
            CHECK(k.full <= k.electric_local + k.electric_nonlocal + k.magnetic + 1e-12);
        }
    }
}

TEST_CASE("Frobenius norm") {
    SpMat m(2, 2);
    m.insert(0, 1) = cplx(3.0, 0.0);
    m.insert(1, 0) = cplx(0.0, 4.0);
    CHECK(frobenius_norm(m) == doctest::Approx(5.0));
}

}  // TEST_SUITE
