#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "su2dual/group.hpp"
#include "su2dual/quadrature.hpp"

using namespace su2dual;

namespace {

AxisAngle random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {2 * kPi * u(rng), std::acos(1 - 2 * u(rng)), 2 * kPi * u(rng)};
}

}  // namespace

TEST_SUITE("group") {

TEST_CASE("Clebsch-Gordan values against closed forms") {
    CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(clebsch_gordan(1, 0, 1, 0, 0, 0) == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(clebsch_gordan(1, 0, 1, 0, 2, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(clebsch_gordan(1, 0, 1, 0, 1, 0) == 0.0);
    CHECK(clebsch_gordan(1, 1, 1, 0, 2, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(clebsch_gordan(2, 2, 1, -1, 1, 1) == doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(1e-15));
    CHECK(clebsch_gordan(1, 1, 1, 1, 1, 2) == 0.0);  // |M| > L
    CHECK_THROWS_AS(clebsch_gordan(-1, 0, 1, 0, 0, 0), std::domain_error);
}

TEST_CASE("Clebsch-Gordan rows are orthonormal") {
    const int l1 = 3, l2 = 2;
    for (int M = -1; M <= 1; ++M)
        for (int L = std::abs(l1 - l2); L <= l1 + l2; ++L)
            for (int Lp = std::abs(l1 - l2); Lp <= l1 + l2; ++Lp) {
                double s = 0;
                for (int m1 = -l1; m1 <= l1; ++m1) {
                    const int m2 = M - m1;
                    if (std::abs(m2) > l2) continue;
                    s += clebsch_gordan(l1, m1, l2, m2, L, M) * clebsch_gordan(l1, m1, l2, m2, Lp, M);
                }
                if (std::abs(M) <= std::min(L, Lp)) CHECK(s == doctest::Approx(L == Lp ? 1.0 : 0.0).epsilon(1e-13));
            }
}

TEST_CASE("transport decomposition equals the trace formula") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        const auto p = random_point(rng);
        const Mat3 a = parallel_transport_matrix(p).full();
        const Mat3 b = transport_from_trace(wigner_d_fundamental(p));
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((a * a.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("U^dag T^a U = R^{ab} T^b") {
    std::mt19937_64 rng(11);
    const auto& T = su2_generators();
    for (int k = 0; k < 20; ++k) {
        const auto p = random_point(rng);
        const Mat2 U = wigner_d_fundamental(p);
        const Mat3 R = transport_from_trace(U);
        for (int a = 0; a < 3; ++a) {
            Mat2 rhs = Mat2::Zero();
            for (int b = 0; b < 3; ++b) rhs += R(a, b) * T[b];
            CHECK((U.adjoint() * T[a] * U - rhs).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("fundamental matrix is unitary with unit determinant") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        const Mat2 U = wigner_d_fundamental(random_point(rng));
        CHECK((U * U.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(std::abs(U.determinant() - cplx(1.0)) < 1e-14);
    }
}

TEST_CASE("Haar volume is 16 pi^2") {
    const double radial = tanh_sinh_integrate([](double w) { return 4 * std::sin(w / 2) * std::sin(w / 2); }, 0, 2 * kPi);
    const double polar = tanh_sinh_integrate([](double t) { return std::sin(t); }, 0, kPi);
    CHECK(radial * polar * 2 * kPi == doctest::Approx(16 * kPi * kPi).epsilon(1e-12));
    CHECK(haar_weight({kPi, kPi / 2, 0.3}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(check_range({7.0, 0.1, 0.1}), std::domain_error);
}

TEST_CASE("spherical harmonics are orthonormal") {
    using boost::math::quadrature::gauss;
    const auto& x = gauss<double, 20>::abscissa();
    const auto& w = gauss<double, 20>::weights();
    const int nphi = 32;
    auto inner = [&](int l1, int m1, int l2, int m2) {
        cplx s = 0;
        for (std::size_t k = 0; k < x.size(); ++k)
            for (double sgn : {1.0, -1.0}) {
                if (x[k] == 0.0 && sgn < 0) continue;
                const double th = std::acos(sgn * x[k]);
                for (int f = 0; f < nphi; ++f) {
                    const double ph = 2 * kPi * f / nphi;
                    s += w[k] * (2 * kPi / nphi) * std::conj(spherical_harmonic(l1, m1, th, ph)) *
                         spherical_harmonic(l2, m2, th, ph);
                }
            }
        return s;
    };
    for (int l1 = 0; l1 <= 4; ++l1)
        for (int m1 = -l1; m1 <= l1; ++m1)
            for (int l2 = 0; l2 <= 4; ++l2)
                for (int m2 = -l2; m2 <= l2; ++m2)
                    CHECK(std::abs(inner(l1, m1, l2, m2) - cplx(l1 == l2 && m1 == m2 ? 1.0 : 0.0)) < 1e-13);
}

TEST_CASE("theta derivative of Y_lm matches central differences") {
    const double h = 1e-5;
    for (int l = 0; l <= 5; ++l)
        for (int m = -l; m <= l; ++m)
            for (double th : {0.3, 1.1, 2.5}) {
                const cplx fd = (spherical_harmonic(l, m, th + h, 0.7) - spherical_harmonic(l, m, th - h, 0.7)) / (2 * h);
                CHECK(std::abs(fd - spherical_harmonic_dtheta(l, m, th, 0.7)) < 1e-8);
            }
}

TEST_CASE("product expansion of spherical harmonics holds pointwise") {
    std::mt19937_64 rng(5);
    for (int l = 0; l <= 3; ++l)
        for (int m = -l; m <= l; ++m)
            for (int l2 = 0; l2 <= 2; ++l2)
                for (int m2 = -l2; m2 <= l2; ++m2) {
                    const auto p = random_point(rng);
                    cplx rhs = 0;
                    for (const auto& t : ylm_product_expand(l, m, l2, m2))
                        rhs += t.coeff * spherical_harmonic(t.L, t.M, p.theta, p.phi);
                    const cplx lhs =
                        spherical_harmonic(l, m, p.theta, p.phi) * spherical_harmonic(l2, m2, p.theta, p.phi);
                    CHECK(std::abs(lhs - rhs) < 1e-13);
                }
}

TEST_CASE("Levi-Civita symbol") {
    CHECK(levi_civita(0, 1, 2) == 1);
    CHECK(levi_civita(1, 0, 2) == -1);
    CHECK(levi_civita(2, 0, 1) == 1);
    CHECK(levi_civita(0, 0, 2) == 0);
}

TEST_CASE("tanh-sinh levels are nested and integrate smooth functions") {
    const auto a = tanh_sinh_rule(0, 1, 4);
    const auto b = tanh_sinh_rule(0, 1, 5);
    for (double x : a.x) CHECK(std::find(b.x.begin(), b.x.end(), x) != b.x.end());
    CHECK(tanh_sinh_integrate([](double x) { return std::exp(x); }, 0, 1) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
    CHECK(tanh_sinh_integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1) == doctest::Approx(2.0).epsilon(1e-10));
}

}  // TEST_SUITE
