#include "su2dual/group.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace su2dual {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

const cpp_int& factorial(int n) {
    static std::vector<cpp_int> table = [] {
        std::vector<cpp_int> t(1, cpp_int(1));
        return t;
    }();
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(table.size()) <= n) {
        table.push_back(table.back() * cpp_int(table.size()));
    }
    return table[n];
}

double racah_cg(int l1, int m1, int l2, int m2, int L, int M) {
    cpp_rational pre(
        cpp_int(2 * L + 1) * factorial(L + l1 - l2) * factorial(L - l1 + l2) * factorial(l1 + l2 - L),
        factorial(l1 + l2 + L + 1));
    pre *= cpp_rational(factorial(L + M) * factorial(L - M) * factorial(l1 - m1) * factorial(l1 + m1) *
                        factorial(l2 - m2) * factorial(l2 + m2));
    cpp_rational sum(0);
    for (int k = 0;; ++k) {
        int d1 = l1 + l2 - L - k;
        int d2 = l1 - m1 - k;
        int d3 = l2 + m2 - k;
        if (d1 < 0 || d2 < 0 || d3 < 0) break;
        int d4 = L - l2 + m1 + k;
        int d5 = L - l1 - m2 + k;
        if (d4 < 0 || d5 < 0) continue;
        cpp_int den = factorial(k) * factorial(d1) * factorial(d2) * factorial(d3) * factorial(d4) * factorial(d5);
        cpp_rational term(cpp_int(1), den);
        if (k % 2) sum -= term;
        else sum += term;
    }
    if (sum == 0) return 0.0;
    cpp_rational sq = pre * sum * sum;
    double mag = std::sqrt(sq.convert_to<double>());
    return sum > 0 ? mag : -mag;
}

}  // namespace

void check_range(const AxisAngle& p) {
    const double eps = 1e-12;
    if (!(p.omega >= -eps && p.omega <= 2 * kPi + eps)) throw std::domain_error("omega outside [0, 2pi]");
    if (!(p.theta >= -eps && p.theta <= kPi + eps)) throw std::domain_error("theta outside [0, pi]");
    if (!(p.phi >= -eps && p.phi <= 2 * kPi + eps)) throw std::domain_error("phi outside [0, 2pi]");
}

Vec3 rotation_axis(const AxisAngle& p) {
    return Vec3(std::cos(p.phi) * std::sin(p.theta), std::sin(p.phi) * std::sin(p.theta), std::cos(p.theta));
}

const std::array<Mat2, 3>& su2_generators() {
    static const std::array<Mat2, 3> t = [] {
        const cplx I(0, 1);
        std::array<Mat2, 3> g;
        g[0] << 0, 0.5, 0.5, 0;
        g[1] << 0, -0.5 * I, 0.5 * I, 0;
        g[2] << 0.5, 0, 0, -0.5;
        return g;
    }();
    return t;
}

Mat2 wigner_d_fundamental(const AxisAngle& p) {
    check_range(p);
    const cplx I(0, 1);
    const double c = std::cos(p.omega / 2), s = std::sin(p.omega / 2);
    const double st = std::sin(p.theta), ct = std::cos(p.theta);
    Mat2 d;
    d(0, 0) = c - I * s * ct;
    d(0, 1) = -I * s * st * std::exp(-I * p.phi);
    d(1, 0) = -I * s * st * std::exp(I * p.phi);
    d(1, 1) = c + I * s * ct;
    return d;
}

double haar_weight(const AxisAngle& p) {
    check_range(p);
    const double s = std::sin(p.omega / 2);
    return 4 * s * s * std::sin(p.theta);
}

double clebsch_gordan(int l1, int m1, int l2, int m2, int L, int M) {
    if (l1 < 0 || l2 < 0 || L < 0) throw std::domain_error("negative angular momentum in clebsch_gordan");
    if (M != m1 + m2) return 0.0;
    if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(M) > L) return 0.0;
    if (L < std::abs(l1 - l2) || L > l1 + l2) return 0.0;

    using Key = std::tuple<int, int, int, int, int>;
    static std::map<Key, double> cache;
    static std::shared_mutex mu;
    Key key{l1, m1, l2, m2, L};
    {
        std::shared_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double v = racah_cg(l1, m1, l2, m2, L, M);
    std::unique_lock lock(mu);
    cache.emplace(key, v);
    return v;
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic requires |m| <= l");
    return boost::math::spherical_harmonic<double>(static_cast<unsigned>(l), m, theta, phi);
}

cplx spherical_harmonic_dtheta(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic requires |m| <= l");
    cplx d = static_cast<double>(m) / std::tan(theta) * spherical_harmonic(l, m, theta, phi);
    if (m < l) {
        d += std::sqrt(static_cast<double>((l - m) * (l + m + 1))) * std::exp(cplx(0, -phi)) *
             spherical_harmonic(l, m + 1, theta, phi);
    }
    return d;
}

std::vector<YlmTerm> ylm_product_expand(int l, int m, int l2, int m2) {
    std::vector<YlmTerm> out;
    const int M = m + m2;
    for (int L = std::abs(l - l2); L <= l + l2; ++L) {
        if (std::abs(M) > L) continue;
        double c0 = clebsch_gordan(l, 0, l2, 0, L, 0);
        if (c0 == 0.0) continue;
        double cm = clebsch_gordan(l, m, l2, m2, L, M);
        if (cm == 0.0) continue;
        double pre = std::sqrt((2.0 * l + 1) * (2.0 * l2 + 1) / (4 * kPi * (2.0 * L + 1)));
        out.push_back({L, M, pre * c0 * cm});
    }
    return out;
}

int levi_civita(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    return ((a + 1) % 3 == b) ? 1 : -1;
}

Mat3 ParallelTransport::full() const {
    return c_cos * Mat3::Identity() + c_sin2 * sym + c_sin * anti;
}

ParallelTransport parallel_transport_matrix(const AxisAngle& p) {
    check_range(p);
    Vec3 n = rotation_axis(p);
    ParallelTransport t;
    t.sym = n * n.transpose();
    t.anti.setZero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) t.anti(a, b) -= levi_civita(a, b, c) * n(c);
    const double s = std::sin(p.omega / 2);
    t.c_cos = std::cos(p.omega);
    t.c_sin2 = 2 * s * s;
    t.c_sin = std::sin(p.omega);
    return t;
}

Mat3 transport_from_trace(const Mat2& U) {
    const auto& T = su2_generators();
    Mat3 r;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) r(a, b) = 2 * (U.adjoint() * T[a] * U * T[b]).trace().real();
    return r;
}

}  // namespace su2dual
