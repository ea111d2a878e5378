#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "su2dual/operators.hpp"
#include "su2dual/oracle.hpp"

using namespace su2dual;

namespace {

double anti_hermitian_defect(const MatC& m) { return (m + m.adjoint()).cwiseAbs().maxCoeff(); }
double hermitian_defect(const MatC& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("Wigner-Eckart assembly agrees with Haar quadrature") {
    const auto rep = wigner_eckart_oracle(20, 2024, 5);
    CHECK(rep.samples.size() == 20);
    CHECK(rep.max_deviation < 1e-8);
}

TEST_CASE("quadrature of single elements for each operator kind") {
    const auto t = build_operator_table(build_local_basis(Coupling::finite(0.9), 8));
    // A few deliberate pairs: ell -> ell +- 1 and same ell.
    const int pairs[][2] = {{0, 1}, {1, 4}, {2, 2}, {4, 7}, {5, 6}};
    for (const auto& p : pairs)
        for (int a = 0; a < 3; ++a) {
            const int i = p[0], j = p[1];
            CHECK(std::abs(t.EL[a](i, j) - haar_matrix_element(t.basis, OracleOp::ElectricLeft, a, 0, i, j)) < 1e-9);
            CHECK(std::abs(t.ER[a](i, j) - haar_matrix_element(t.basis, OracleOp::ElectricRight, a, 0, i, j)) < 1e-9);
            CHECK(std::abs(t.W[a](i, j) - haar_matrix_element(t.basis, OracleOp::LoopVector, a, 0, i, j)) < 1e-9);
            for (int b = 0; b < 3; ++b)
                CHECK(std::abs(t.R[a][b](i, j) - haar_matrix_element(t.basis, OracleOp::Transport, a, b, i, j)) < 1e-9);
        }
}

TEST_CASE("loop scalar and E_L.E_R: closed forms against quadrature") {
    for (auto c : {Coupling::finite(0.6), Coupling::finite(1.4), Coupling::electric()}) {
        const auto b = build_local_basis(c, 14);
        const RadialQuadrature q(b);
        CHECK((loop_scalar(b) - loop_scalar_quadrature(b, q)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((el_er_product(b) - el_er_product_quadrature(b, q)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("operator symmetries") {
    const auto t = build_operator_table(build_local_basis(Coupling::finite(1.1), 14));
    CHECK(hermitian_defect(t.S) < 1e-13);
    CHECK(hermitian_defect(t.casimir) < 1e-13);
    CHECK(hermitian_defect(t.el_er) < 1e-13);
    for (int a = 0; a < 3; ++a) {
        CHECK(hermitian_defect(t.EL[a]) < 1e-13);
        CHECK(hermitian_defect(t.ER[a]) < 1e-13);
        CHECK(anti_hermitian_defect(t.W[a]) < 1e-13);
        for (int b = 0; b < 3; ++b) CHECK(hermitian_defect(t.R[a][b]) < 1e-13);
    }
}

TEST_CASE("left and right Casimirs agree on whole multiplets") {
    for (auto c : {Coupling::finite(0.5), Coupling::finite(2.0), Coupling::electric()}) {
        int lmax = 14;
        while (!build_local_basis(c, lmax).complete_multiplets()) ++lmax;
        const auto t = build_operator_table(build_local_basis(c, lmax));
        MatC l = MatC::Zero(t.size(), t.size()), r = l;
        for (int a = 0; a < 3; ++a) {
            l += t.EL[a] * t.EL[a];
            r += t.ER[a] * t.ER[a];
        }
        CHECK((l - r).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("electric basis: Casimir is diagonal with 4 j(j+1)") {
    const auto t = build_operator_table(build_local_basis(Coupling::electric(), 14));
    for (int i = 0; i < t.size(); ++i) {
        const auto& l = t.basis.labels[i];
        const double j = 0.5 * (l.alpha + l.ell);
        CHECK(t.casimir(i, i).real() == doctest::Approx(4 * j * (j + 1)).epsilon(1e-12));
        for (int k = 0; k < t.size(); ++k)
            if (k != i) CHECK(std::abs(t.casimir(i, k)) < 1e-12);
    }
}

TEST_CASE("field actions obey E_R^a = -R^{ba} E_L^b pointwise") {
    const auto b = build_local_basis(Coupling::finite(0.8), 10);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 30; ++k) {
        const AxisAngle p{2 * kPi * u(rng), kPi * u(rng), 2 * kPi * u(rng)};
        const Mat3 R = transport_from_trace(wigner_d_fundamental(p));
        const int idx = static_cast<int>(rng() % b.size());
        for (int a = 0; a < 3; ++a) {
            cplx rhs = 0;
            for (int c = 0; c < 3; ++c) rhs -= R(c, a) * left_field_action(b, idx, c, p);
            CHECK(std::abs(right_field_action(b, idx, a, p) - rhs) < 1e-10);
        }
    }
}

TEST_CASE("left field action is i d/dt psi(e^{i t sigma} U) by finite differences") {
    const auto b = build_local_basis(Coupling::finite(1.2), 8);
    auto to_axis_angle = [](const Mat2& U) {
        const double q0 = U(0, 0).real();
        const Vec3 q(-U(0, 1).imag(), -U(0, 1).real(), -U(0, 0).imag());
        const double s = q.norm();
        const double omega = 2 * std::atan2(s, q0);
        const Vec3 n = q / s;
        double phi = std::atan2(n(1), n(0));
        if (phi < 0) phi += 2 * kPi;
        return AxisAngle{omega, std::acos(std::clamp(n(2), -1.0, 1.0)), phi};
    };
    const AxisAngle p{2.1, 1.0, 0.6};
    const Mat2 U = wigner_d_fundamental(p);
    const auto& T = su2_generators();
    const double h = 1e-5;
    for (int idx = 0; idx < b.size(); ++idx)
        for (int a = 0; a < 3; ++a) {
            auto shifted = [&](double t) {
                const Mat2 g = std::cos(t) * Mat2::Identity() + cplx(0.0, 2 * std::sin(t)) * T[a];  // e^{i t sigma^a}
                return basis_wavefunction(b, idx, to_axis_angle(g * U));
            };
            const cplx fd = cplx(0.0, 1.0) * (shifted(h) - shifted(-h)) / (2 * h);
            CHECK(std::abs(fd - left_field_action(b, idx, a, p)) < 1e-7);
        }
}

}  // TEST_SUITE
