#include "su2dual/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

#include "su2dual/quadrature.hpp"

namespace su2dual {

namespace {

constexpr int kThetaNodes = 20;
constexpr int kPhiNodes = 32;

struct RadialPart {
    double g;   // u / (2 s)
    double dg;  // dG/dq0 with q0 = cos(w/2)
};

RadialPart radial_part(const RadialEigenpair& r, double omega) {
    const double s = std::sin(0.5 * omega), c = std::cos(0.5 * omega);
    const double u = r.u(omega), du = r.du(omega);
    const double dg_domega = du / (2 * s) - u * c / (4 * s * s);
    return {u / (2 * s), dg_domega * (-2.0 / s)};
}

// Gradient of Y_lm(q / |q|) with respect to q, for |q| = 1.
std::array<cplx, 3> unit_sphere_gradient(int l, int m, double theta, double phi) {
    const cplx y = spherical_harmonic(l, m, theta, phi);
    const cplx dth = spherical_harmonic_dtheta(l, m, theta, phi);
    const cplx dph = cplx(0.0, m) * y / std::sin(theta);
    const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);
    return {dth * (ct * cp) + dph * (-sp), dth * (ct * sp) + dph * cp, dth * (-st)};
}

// i d/dt psi along the curve whose quaternion velocity is (dq0, dq).
cplx directional(const LocalBasis& basis, int index, const AxisAngle& p, double dq0, const Vec3& dq) {
    const auto& lab = basis.labels.at(index);
    const RadialPart rp = radial_part(basis.radial_of(lab), p.omega);
    const double s = std::sin(0.5 * p.omega);
    const cplx y = spherical_harmonic(lab.ell, lab.m, p.theta, p.phi);
    cplx dy = 0.0;
    if (lab.ell > 0) {
        const auto grad = unit_sphere_gradient(lab.ell, lab.m, p.theta, p.phi);
        for (int c = 0; c < 3; ++c) dy += grad[c] * dq(c);
        dy /= s;
    }
    return rp.dg * dq0 * y + rp.g * dy;
}

Vec3 quaternion_vector(const AxisAngle& p) { return std::sin(0.5 * p.omega) * rotation_axis(p); }

}  // namespace

cplx basis_wavefunction(const LocalBasis& basis, int index, const AxisAngle& p) {
    const auto& lab = basis.labels.at(index);
    return radial_part(basis.radial_of(lab), p.omega).g * spherical_harmonic(lab.ell, lab.m, p.theta, p.phi);
}

cplx left_field_action(const LocalBasis& basis, int index, int a, const AxisAngle& p) {
    const double q0 = std::cos(0.5 * p.omega);
    const Vec3 q = quaternion_vector(p);
    Vec3 dq;
    for (int c = 0; c < 3; ++c) {
        double v = (a == c) ? q0 : 0.0;
        for (int b = 0; b < 3; ++b) v += levi_civita(a, b, c) * q(b);
        dq(c) = -0.5 * v;
    }
    return cplx(0.0, 2.0) * directional(basis, index, p, 0.5 * q(a), dq);
}

cplx right_field_action(const LocalBasis& basis, int index, int a, const AxisAngle& p) {
    const double q0 = std::cos(0.5 * p.omega);
    const Vec3 q = quaternion_vector(p);
    Vec3 dq;
    for (int c = 0; c < 3; ++c) {
        double v = (a == c) ? q0 : 0.0;
        for (int b = 0; b < 3; ++b) v -= levi_civita(a, b, c) * q(b);
        dq(c) = -0.5 * v;
    }
    return cplx(0.0, -2.0) * directional(basis, index, p, 0.5 * q(a), dq);
}

const char* oracle_op_name(OracleOp op) {
    switch (op) {
        case OracleOp::ElectricLeft: return "E_L";
        case OracleOp::ElectricRight: return "E_R";
        case OracleOp::LoopScalar: return "S";
        case OracleOp::LoopVector: return "W";
        case OracleOp::Transport: return "R";
    }
    return "?";
}

cplx haar_matrix_element(const LocalBasis& basis, OracleOp op, int a, int b, int i, int j, int omega_level) {
    using boost::math::quadrature::gauss;
    const auto& li = basis.labels.at(i);
    const auto& lj = basis.labels.at(j);
    const auto& ri = basis.radial_of(li);
    const auto& rj = basis.radial_of(lj);

    // Angular grid: symmetric Gauss-Legendre in cos(theta) times a uniform phi grid.
    struct AngularNode {
        double w, theta, phi;
        Vec3 n;
        cplx yi, yj;
        std::array<cplx, 3> grad{};
    };
    std::vector<AngularNode> ang;
    const auto& xs = gauss<double, kThetaNodes>::abscissa();
    const auto& ws = gauss<double, kThetaNodes>::weights();
    const double dphi = 2 * kPi / kPhiNodes;
    auto add_theta = [&](double x, double w) {
        for (int f = 0; f < kPhiNodes; ++f) {
            AngularNode nd;
            nd.w = w * dphi;
            nd.theta = std::acos(x);
            nd.phi = f * dphi;
            nd.n = rotation_axis({0.0, nd.theta, nd.phi});
            nd.yi = spherical_harmonic(li.ell, li.m, nd.theta, nd.phi);
            nd.yj = spherical_harmonic(lj.ell, lj.m, nd.theta, nd.phi);
            if (lj.ell > 0) nd.grad = unit_sphere_gradient(lj.ell, lj.m, nd.theta, nd.phi);
            ang.push_back(nd);
        }
    };
    for (std::size_t k = 0; k < xs.size(); ++k) {
        add_theta(xs[k], ws[k]);
        if (xs[k] != 0.0) add_theta(-xs[k], ws[k]);
    }

    const auto wrule = tanh_sinh_rule(0.0, 2 * kPi, omega_level);
    const bool left = op == OracleOp::ElectricLeft;
    cplx total = 0.0;
    for (std::size_t k = 0; k < wrule.x.size(); ++k) {
        const double omega = wrule.x[k];
        const double s = std::sin(0.5 * omega), q0 = std::cos(0.5 * omega);
        // Nodes this close to the ends carry weight below rounding and overflow 1/s.
        if (s < 1e-8) continue;
        const RadialPart pi = radial_part(ri, omega), pj = radial_part(rj, omega);
        cplx shell = 0.0;
        for (const auto& nd : ang) {
            cplx opsi;
            switch (op) {
                case OracleOp::ElectricLeft:
                case OracleOp::ElectricRight: {
                    const double sign = left ? 1.0 : -1.0;
                    cplx dy = 0.0;
                    for (int c = 0; c < 3; ++c) {
                        double v = (a == c) ? q0 : 0.0;
                        for (int bb = 0; bb < 3; ++bb) v += sign * levi_civita(a, bb, c) * s * nd.n(bb);
                        dy += nd.grad[c] * (-0.5 * v);
                    }
                    const cplx d = pj.dg * (0.5 * s * nd.n(a)) * nd.yj + pj.g * dy / s;
                    opsi = cplx(0.0, 2.0 * sign) * d;
                    break;
                }
                case OracleOp::LoopScalar: opsi = q0 * pj.g * nd.yj; break;
                case OracleOp::LoopVector: opsi = cplx(0.0, -2.0 * s) * nd.n(a) * pj.g * nd.yj; break;
                case OracleOp::Transport: {
                    const AxisAngle p{omega, nd.theta, nd.phi};
                    opsi = transport_from_trace(wigner_d_fundamental(p))(a, b) * pj.g * nd.yj;
                    break;
                }
            }
            shell += nd.w * std::conj(pi.g * nd.yi) * opsi;
        }
        total += wrule.w[k] * 4 * s * s * shell;
    }
    return total;
}

OracleReport wigner_eckart_oracle(int samples, std::uint64_t seed, int lmax) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    const Coupling couplings[] = {Coupling::finite(0.7), Coupling::finite(1.3), Coupling::electric()};
    std::vector<LoopOperatorTable> tables;
    for (const auto& c : couplings) tables.push_back(build_operator_table(build_local_basis(c, lmax)));

    std::mt19937_64 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    OracleReport rep;
    for (int k = 0; k < samples; ++k) {
        const int ci = pick(3);
        const auto& t = tables[ci];
        OracleSample s;
        s.coupling = couplings[ci].key();
        s.op = static_cast<OracleOp>(pick(5));
        s.a = pick(3);
        s.b = pick(3);
        s.i = pick(t.size());
        s.j = pick(t.size());
        switch (s.op) {
            case OracleOp::ElectricLeft: s.assembled = t.EL[s.a](s.i, s.j); break;
            case OracleOp::ElectricRight: s.assembled = t.ER[s.a](s.i, s.j); break;
            case OracleOp::LoopScalar: s.assembled = t.S(s.i, s.j); break;
            case OracleOp::LoopVector: s.assembled = t.W[s.a](s.i, s.j); break;
            case OracleOp::Transport: s.assembled = t.R[s.a][s.b](s.i, s.j); break;
        }
        s.quadrature = haar_matrix_element(t.basis, s.op, s.a, s.b, s.i, s.j);
        s.deviation = std::abs(s.assembled - s.quadrature);
        rep.max_deviation = std::max(rep.max_deviation, s.deviation);
        rep.samples.push_back(s);
    }
    return rep;
}

nlohmann::json to_json(const OracleReport& r) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : r.samples)
        a.push_back({{"coupling", s.coupling},
                     {"op", oracle_op_name(s.op)},
                     {"a", s.a},
                     {"b", s.b},
                     {"i", s.i},
                     {"j", s.j},
                     {"assembled", {s.assembled.real(), s.assembled.imag()}},
                     {"quadrature", {s.quadrature.real(), s.quadrature.imag()}},
                     {"deviation", s.deviation}});
    return {{"samples", a}, {"max_deviation", r.max_deviation}};
}

}  // namespace su2dual
