#include <doctest.h>

#include <cmath>

#include "su2dual/observables.hpp"
#include "su2dual/variational.hpp"

using namespace su2dual;

namespace {

TableCache& cache() {
    static TableCache c;
    return c;
}

OptimizerOptions quick_options() {
    OptimizerOptions o;
    o.max_cycles = 3;
    o.max_evals_per_phase = 80;
    o.restarts = 0;
    return o;
}

}  // namespace

TEST_SUITE("variational") {

TEST_CASE("energy functional is the ground energy of the assembled Hamiltonian") {
    const Locals l = initial_ansatz(0.9);
    const Truncation t{3, 3, 3, 1, 1};
    CouplingConfig c;
    c.beta = 0.9;
    c.locals = l;
    c.trunc = t;
    const auto h = assemble_full(c, cache());
    const auto d = ground_state_dense(h.H);
    CHECK(energy_functional(0.9, l, t, cache()) == doctest::Approx(d.energy).epsilon(1e-12));
}

TEST_CASE("Nelder-Mead minimises Rosenbrock inside a box") {
    auto rosen = [](const std::vector<double>& x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    const auto r = nelder_mead(rosen, {-1.2, 1.0}, {-2, -2}, {2, 2}, 0.5, 1e-14, 1e-8, 4000);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Nelder-Mead respects bounds and reports strict improvements") {
    auto bowl = [](const std::vector<double>& x) { return std::pow(x[0] - 5, 2) + std::pow(x[1] + 1, 2); };
    std::vector<double> seen;
    const auto r = nelder_mead(bowl, {0, 0}, {-1, -1}, {1, 1}, 0.3, 1e-14, 1e-9, 2000,
                               [&](const std::vector<double>& x, double f) {
                                   CHECK(x[0] <= 1.0);
                                   CHECK(x[0] >= -1.0);
                                   seen.push_back(f);
                               });
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] < seen[i - 1]);
    CHECK_THROWS_AS(nelder_mead(bowl, {0, 0}, {-1}, {1, 1}, 0.3, 1e-8, 1e-8, 10), std::invalid_argument);
}

TEST_CASE("optimisation never raises the energy and its iterates decrease") {
    for (double beta : {0.3, 2.0}) {
        const auto tr = optimize_couplings(beta, {3, 3, 3, 1, 1}, quick_options(), cache());
        CHECK(tr.e_final <= tr.e_initial + 1e-12);
        REQUIRE(!tr.iterates.empty());
        CHECK(tr.iterates.front().energy == doctest::Approx(tr.e_initial));
        CHECK(tr.iterates.back().energy == doctest::Approx(tr.e_final));
        for (std::size_t i = 1; i < tr.iterates.size(); ++i) CHECK(tr.iterates[i].energy < tr.iterates[i - 1].energy);
        CHECK(energy_functional(beta, tr.final, tr.trunc, cache()) == doctest::Approx(tr.e_final).epsilon(1e-12));
    }
}

TEST_CASE("strong coupling leaves almost nothing to optimise") {
    const auto tr = optimize_couplings(0.01, {2, 2, 2, 1, 1}, quick_options(), cache());
    CHECK(relative_energy_diff(tr.e_initial, tr.e_final) >= 0.0);
    CHECK(relative_energy_diff(tr.e_initial, tr.e_final) < 1e-3);
}

TEST_CASE("nested truncations at fixed couplings: energies non-increasing") {
    for (double beta : {0.1, 1.0, 10.0}) {
        double prev = INFINITY;
        for (int L = 1; L <= 5; ++L) {
            const double e = energy_functional(beta, initial_ansatz(beta), {L, L, L, 1, 1}, cache());
            CHECK(e <= prev + 1e-10 * std::abs(e));
            prev = e;
        }
    }
}

TEST_CASE("coupling dependence fades as the basis grows") {
    const double beta = 1.0;
    auto spread = [&](int L) {
        double lo = INFINITY, hi = -INFINITY;
        for (double f : {0.6, 1.0, 1.6}) {
            Locals l = initial_ansatz(beta);
            for (int s : {kWA, kWB, kWC}) l[s] = Coupling::finite(f * l[s].g());
            const double e = energy_functional(beta, l, {L, L, L, 1, 1}, cache());
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        return hi - lo;
    };
    const double s2 = spread(2), s6 = spread(6);
    MESSAGE("energy spread over couplings: L=2 " << s2 << ", L=6 " << s6);
    CHECK(s6 < 0.5 * s2);
}

TEST_CASE("sweeps: empty input, ordering and determinism") {
    SweepOptions opt;
    opt.optimizer = quick_options();
    opt.workers = 1;
    CHECK(sweep({}, {{1, 1, 1, 1, 1}}, {SweepMode::Ansatz}, opt, cache()).empty());
    CHECK(sweep({1.0}, {}, {SweepMode::Ansatz}, opt, cache()).empty());

    const std::vector<double> betas{0.2, 3.0};
    const std::vector<Truncation> truncs{{1, 1, 1, 1, 1}, {2, 2, 2, 1, 1}};
    const std::vector<SweepMode> modes{SweepMode::Ansatz, SweepMode::Variational, SweepMode::ElectricBaseline};
    const auto a = sweep(betas, truncs, modes, opt, cache());
    opt.workers = 3;
    const auto b = sweep(betas, truncs, modes, opt, cache());
    REQUIRE(a.size() == 12);
    REQUIRE(b.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ok);
        CHECK(a[i].beta == betas[i / 6]);
        CHECK(a[i].trunc == truncs[(i / 3) % 2]);
        CHECK(a[i].mode == modes[i % 3]);
        CHECK(a[i].energy == b[i].energy);
        CHECK(a[i].plaquette == b[i].plaquette);
        CHECK(a[i].trace.has_value() == (a[i].mode == SweepMode::Variational));
    }
}

TEST_CASE("invalid inputs become failed points, not exceptions") {
    SweepOptions opt;
    const auto p = run_point(-1.0, {2, 2, 2, 1, 1}, SweepMode::Ansatz, opt, cache());
    CHECK_FALSE(p.ok);
    CHECK(!p.error.empty());
    CHECK_THROWS_AS(optimize_couplings(0.0, {1, 1, 1, 1, 1}, {}, cache()), std::invalid_argument);
}

TEST_CASE("large-loop plateau is reported") {
    const auto tr = optimize_couplings(1.0, {2, 2, 2, 1, 1}, quick_options(), cache());
    MESSAGE("loop plateau deviation " << tr.loop_plateau);
    CHECK(tr.loop_plateau >= 0.0);
    CHECK(tr.loop_plateau < 1e-6);
}

TEST_CASE("log grid") {
    const auto g = log_grid(0.01, 100.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 100.0);
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(log_grid(2.0, 5.0, 1) == std::vector<double>{2.0});
    CHECK(log_grid(1.0, 2.0, 0).empty());
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("mode names round-trip") {
    for (auto m : {SweepMode::Ansatz, SweepMode::Variational, SweepMode::ElectricBaseline})
        CHECK(parse_mode(mode_name(m)) == m);
    CHECK_THROWS_AS(parse_mode("magnetic"), std::invalid_argument);
}

}  // TEST_SUITE
