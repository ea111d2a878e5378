#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "su2dual/basis.hpp"
#include "su2dual/group.hpp"
#include "su2dual/quadrature.hpp"
#include "su2dual/radial.hpp"

using namespace su2dual;

namespace {

double potential(int ell, double inv_g4, double w) {
    const double s = std::sin(w / 2);
    return 0.25 * (ell * (ell + 1) / (s * s) + inv_g4 * (1 - std::cos(w / 2)) - 1);
}

// Second-order finite differences on n interior nodes of (0, 2 pi).
Eigen::VectorXd fd_levels(int ell, double inv_g4, int n, int count) {
    const double h = 2 * kPi / (n + 1);
    Eigen::VectorXd diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) diag(i) = 2 / (h * h) + potential(ell, inv_g4, h * (i + 1));
    off.setConstant(-1 / (h * h));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return es.eigenvalues().head(count);
}

// Richardson extrapolation of the O(h^2) scheme from n and 2n+1 nodes (h halves).
Eigen::VectorXd fd_richardson(int ell, double inv_g4, int count) {
    const auto a = fd_levels(ell, inv_g4, 1599, count);
    const auto b = fd_levels(ell, inv_g4, 3199, count);
    return (4 * b - a) / 3;
}

}  // namespace

TEST_SUITE("radial") {

TEST_CASE("electric-limit l=0 spectrum is j(j+1)") {
    const auto levels = solve_radial(0, Coupling::electric(), 6);
    REQUIRE(levels.size() == 6);
    for (int n = 0; n < 6; ++n) {
        const double j = 0.5 * n;
        CHECK(std::fabs(levels[n].epsilon_tilde - j * (j + 1)) <= 1e-6 * std::max(1.0, j * (j + 1)));
        CHECK(electric_limit_eigenvalue(0, n) == doctest::Approx(j * (j + 1)));
    }
}

TEST_CASE("electric-limit eigenfunctions are sin((2j+1) w / 2)") {
    const auto levels = solve_radial(0, Coupling::electric(), 3);
    for (int n = 0; n < 3; ++n)
        for (double w : {0.4, 1.7, 3.9}) {
            const double exact = std::sin((n + 1) * w / 2) / std::sqrt(kPi);
            CHECK(std::fabs(std::fabs(levels[n].u(w)) - std::fabs(exact)) < 1e-12);
        }
}

TEST_CASE("finite coupling agrees with a Richardson-extrapolated finite-difference solve") {
    for (double g : {0.5, 1.0, 1.6})
        for (int ell : {0, 1, 2}) {
            const auto spectral = solve_radial(ell, Coupling::finite(g), 3);
            const auto fd = fd_richardson(ell, 1 / std::pow(g, 4), 3);
            for (int k = 0; k < 3; ++k) {
                INFO("g=" << g << " l=" << ell << " level " << k);
                CHECK(std::fabs(spectral[k].epsilon_tilde - fd(k)) <= 1e-6 * std::max(1.0, std::fabs(fd(k))));
            }
        }
}

TEST_CASE("g = 1 ground state is stable under grid doubling") {
    const double e1 = fd_levels(0, 1.0, 1599, 1)(0), e2 = fd_levels(0, 1.0, 3199, 1)(0);
    const double e3 = fd_levels(0, 1.0, 6399, 1)(0);
    const double r1 = (4 * e2 - e1) / 3, r2 = (4 * e3 - e2) / 3;
    CHECK(std::fabs(r1 - r2) < 1e-6 * std::fabs(r2));
    CHECK(std::fabs(solve_radial(0, Coupling::finite(1.0), 1)[0].epsilon_tilde - r2) < 1e-6 * std::fabs(r2));
}

TEST_CASE("eigenfunctions are orthonormal and solve the radial equation") {
    const double g = 0.8;
    for (int ell : {0, 1, 3}) {
        const auto r = solve_radial(ell, Coupling::finite(g), 4);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double s = tanh_sinh_integrate([&](double w) { return r[a].u(w) * r[b].u(w); }, 0, 2 * kPi, 1e-13);
                CHECK(std::fabs(s - (a == b ? 1.0 : 0.0)) < 1e-8);
            }
        for (const auto& e : r)
            for (double w : {0.5, 2.0, 3.3, 5.5}) {
                const double res = -e.d2u(w) + (potential(ell, 1 / std::pow(g, 4), w) - e.epsilon_tilde) * e.u(w);
                CHECK(std::fabs(res) < 1e-7);
            }
    }
}

TEST_CASE("ground level decreases as g grows") {
    double prev = -1e300;
    for (double g : {2.0, 1.0, 0.5, 0.25}) {
        const double e = solve_radial(0, Coupling::finite(g), 1)[0].epsilon_tilde;
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("L_max = 5 enumeration") {
    const auto b = build_local_basis(Coupling::electric(), 5);
    const BasisLabel expected[] = {{0, 0, 0}, {0, 1, -1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}};
    REQUIRE(b.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(b.labels[i] == expected[i]);
    const auto f = build_local_basis(Coupling::finite(1.0), 5);
    for (int i = 0; i < 5; ++i) CHECK(f.labels[i] == expected[i]);
    CHECK(build_local_basis(Coupling::finite(0.3), 1).labels[0] == BasisLabel{0, 0, 0});
}

TEST_CASE("electric L_max = 4 puts the l = 1 triplet before the first l = 0 excitation") {
    const auto b = build_local_basis(Coupling::electric(), 4);
    for (int i = 1; i < 4; ++i) CHECK(b.labels[i].ell == 1);
    CHECK(b.eps[3] == doctest::Approx(0.75));
}

TEST_CASE("Fock index round trip and lookup errors") {
    const auto b = build_local_basis(Coupling::finite(0.9), 14);
    for (int i = 0; i < b.size(); ++i) CHECK(fock_index(fock_label(i, b), b) == i);
    CHECK(fock_index(BasisLabel{0, 1, -1}, b) == 1);
    CHECK_THROWS_AS(fock_index(BasisLabel{5, 7, 0}, b), std::out_of_range);
}

TEST_CASE("m-multiplets share one eigenvalue") {
    const auto b = build_local_basis(Coupling::finite(0.6), 30);
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j)
            if (b.labels[i].alpha == b.labels[j].alpha && b.labels[i].ell == b.labels[j].ell) CHECK(b.eps[i] == b.eps[j]);
}

}  // TEST_SUITE
