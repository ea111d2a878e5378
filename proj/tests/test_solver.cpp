#include <doctest.h>

#include <random>

#include "su2dual/solver.hpp"

using namespace su2dual;

namespace {

SpMat random_hermitian(int n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(density);
    std::vector<Eigen::Triplet<cplx>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 3.0 * u(rng));
        for (int j = i + 1; j < n; ++j)
            if (keep(rng)) {
                const cplx z(u(rng), u(rng));
                t.emplace_back(i, j, z);
                t.emplace_back(j, i, std::conj(z));
            }
    }
    SpMat m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("1x1 problem") {
    SpMat m(1, 1);
    m.insert(0, 0) = 4.25;
    const auto r = ground_state(m);
    CHECK(r.energy == doctest::Approx(4.25));
    CHECK(std::abs(r.psi(0) - 1.0) < 1e-14);
}

TEST_CASE("Lanczos agrees with the dense solver") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const SpMat m = random_hermitian(125, 0.08, seed);
        const auto d = ground_state_dense(m);
        SolverOptions opt;
        opt.dense_threshold = 0;
        const auto l = ground_state(m, opt);
        CHECK(l.method != d.method);
        CHECK(std::abs(l.energy - d.energy) < 1e-9);
        CHECK(std::abs(std::abs(l.psi.dot(d.psi)) - 1.0) < 1e-8);
    }
}

TEST_CASE("returned state is normalised, phase-fixed and an eigenvector") {
    const SpMat m = random_hermitian(300, 0.03, 9);
    SolverOptions opt;
    opt.dense_threshold = 0;
    for (const auto& r : {ground_state_dense(m), ground_state_lanczos(m, opt)}) {
        CHECK(r.psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
        Eigen::Index k;
        r.psi.cwiseAbs().maxCoeff(&k);
        CHECK(r.psi(k).real() > 0);
        CHECK(std::abs(r.psi(k).imag()) < 1e-12);
        const double res = (m * r.psi - r.energy * r.psi).norm();
        CHECK(res < 1e-7);
        CHECK(r.residual == doctest::Approx(res).epsilon(1e-3).scale(1e-9));
    }
}

TEST_CASE("dual Hamiltonian: both back ends give the same ground energy") {
    TableCache cache;
    CouplingConfig c;
    c.beta = 1.0;
    c.locals = initial_ansatz(1.0);
    c.trunc = {4, 4, 4, 1, 1};
    const auto h = assemble_full(c, cache);
    SolverOptions opt;
    opt.dense_threshold = 0;
    const auto l = ground_state(h, opt);
    const auto d = ground_state_dense(h.H);
    CHECK(std::abs(l.energy - d.energy) < 1e-9 * std::abs(d.energy));
    CHECK(l.config.trunc == c.trunc);
}

}  // TEST_SUITE
