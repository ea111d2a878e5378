#include "su2dual/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <lapacke.h>

namespace su2dual {

namespace {
constexpr double kPiR = 3.14159265358979323846;

// 1/sqrt(2 h_0) for the Gegenbauer weight (1-t^2)^(lambda-1/2).
double p0_value(int lambda) {
    const double lh0 = std::log(kPiR) + (1.0 - 2.0 * lambda) * std::log(2.0) + std::lgamma(2.0 * lambda) -
                       std::log(static_cast<double>(lambda)) - 2.0 * std::lgamma(static_cast<double>(lambda));
    return std::exp(-0.5 * (std::log(2.0) + lh0));
}

double diag_entry(int ell, int n) {
    const double k = n + ell + 1.0;
    return (k * k - 1.0) / 4.0;
}
}  // namespace

Coupling Coupling::finite(double g) {
    if (!(g > 0) || !std::isfinite(g)) throw std::domain_error("local coupling must be positive and finite");
    Coupling c;
    c.electric_ = false;
    c.g_ = g;
    return c;
}

std::string Coupling::key() const {
    if (electric_) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", g_);
    return buf;
}

double cos_half_offdiag(int ell, int n) {
    const double lam = ell + 1.0;
    return 0.5 * std::sqrt((n + 1.0) * (n + 2.0 * lam) / ((n + lam) * (n + lam + 1.0)));
}

double electric_limit_eigenvalue(int ell, int alpha) {
    const double j = 0.5 * (alpha + ell);
    return j * (j + 1.0);
}

GegenbauerValues gegenbauer_phi(int ell, int N, double x) {
    const int lam = ell + 1;
    const double s = std::sin(x), t = std::cos(x);
    GegenbauerValues v;
    v.phi.resize(N);
    v.dphi.resize(N);
    v.d2phi.resize(N);
    if (N == 0) return v;
    // orthonormal-scaled polynomials p_n(t) and p_n'(t)
    Eigen::VectorXd p(N), dp(N);
    p(0) = p0_value(lam);
    dp(0) = 0.0;
    if (N > 1) {
        const double a0 = cos_half_offdiag(ell, 0);
        p(1) = t * p(0) / a0;
        dp(1) = p(0) / a0;
    }
    for (int n = 1; n + 1 < N; ++n) {
        const double an = cos_half_offdiag(ell, n), am = cos_half_offdiag(ell, n - 1);
        p(n + 1) = (t * p(n) - am * p(n - 1)) / an;
        dp(n + 1) = (t * dp(n) + p(n) - am * dp(n - 1)) / an;
    }
    const double s_lm1 = std::pow(s, lam - 1);
    const double s_lam = s_lm1 * s;
    const double ll = ell * (ell + 1.0);
    for (int n = 0; n < N; ++n) {
        v.phi(n) = s_lam * p(n);
        v.dphi(n) = s_lm1 * (lam * t * p(n) - s * s * dp(n));
        const double k = n + ell + 1.0;
        // from the eigenvalue equation phi'' = (l(l+1)/sin^2 x - k^2) phi
        const double sing = (ell == 0) ? 0.0 : ll * std::pow(s, lam - 2) * p(n);
        v.d2phi(n) = sing - k * k * v.phi(n);
    }
    return v;
}

namespace {
double eval_series(const RadialEigenpair& r, double omega, int which) {
    const int N = static_cast<int>(r.coeffs.size());
    GegenbauerValues g = gegenbauer_phi(r.ell, N, 0.5 * omega);
    switch (which) {
        case 0: return r.coeffs.dot(g.phi);
        case 1: return 0.5 * r.coeffs.dot(g.dphi);
        default: return 0.25 * r.coeffs.dot(g.d2phi);
    }
}

// Lowest `count` eigenpairs of the N-term Ritz matrix.
void ritz(int ell, double inv_g4, int N, int count, Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) {
    const double v = 0.25 * inv_g4;
    std::vector<double> d(N), e(std::max(N, 1), 0.0);
    for (int n = 0; n < N; ++n) d[n] = diag_entry(ell, n) + v;
    for (int n = 0; n + 1 < N; ++n) e[n] = -v * cos_half_offdiag(ell, n);
    lapack_int m = 0;
    std::vector<double> w(N);
    std::vector<double> z(static_cast<std::size_t>(N) * count);
    std::vector<lapack_int> isuppz(2 * std::max(count, 1));
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', N, d.data(), e.data(), 0.0, 0.0, 1, count,
                                     0.0, &m, w.data(), z.data(), N, isuppz.data());
    if (info != 0 || m != count) {
        std::ostringstream os;
        os << "radial eigensolve failed (ell=" << ell << ", N=" << N << ", info=" << info << ")";
        throw std::runtime_error(os.str());
    }
    evals = Eigen::Map<Eigen::VectorXd>(w.data(), count);
    evecs = Eigen::Map<Eigen::MatrixXd>(z.data(), N, count);
}
}  // namespace

double RadialEigenpair::u(double omega) const { return eval_series(*this, omega, 0); }
double RadialEigenpair::du(double omega) const { return eval_series(*this, omega, 1); }
double RadialEigenpair::d2u(double omega) const { return eval_series(*this, omega, 2); }

std::vector<RadialEigenpair> solve_radial(int ell, const Coupling& coupling, int count, const RadialOptions& opt) {
    if (ell < 0) throw std::domain_error("ell must be non-negative");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    std::vector<RadialEigenpair> out;
    if (coupling.is_electric()) {
        for (int a = 0; a < count; ++a) {
            RadialEigenpair r;
            r.ell = ell;
            r.alpha = a;
            r.epsilon_tilde = electric_limit_eigenvalue(ell, a);
            r.coeffs = Eigen::VectorXd::Unit(a + 1, a);
            r.basis_size = count;
            out.push_back(std::move(r));
        }
        return out;
    }

    int N = std::max(opt.n_min, 2 * count + 16);
    Eigen::VectorXd ev_prev, ev;
    Eigen::MatrixXd vec_prev, vec;
    ritz(ell, coupling.inv_g4(), N, count, ev_prev, vec_prev);
    double change = 0.0;
    for (;;) {
        const int N2 = 2 * N;
        if (N2 > opt.n_max) {
            std::ostringstream os;
            os << "radial solve not converged: ell=" << ell << " g=" << coupling.g() << " N=" << N
               << " last relative change=" << change;
            throw std::runtime_error(os.str());
        }
        ritz(ell, coupling.inv_g4(), N2, count, ev, vec);
        change = 0.0;
        for (int k = 0; k < count; ++k)
            change = std::max(change, std::fabs(ev(k) - ev_prev(k)) / std::max(1.0, std::fabs(ev(k))));
        // eigensolver rounding grows with the largest diagonal entry ~ N^2 / 4
        const double floor = 16.0 * std::numeric_limits<double>::epsilon() * diag_entry(ell, N);
        N = N2;
        ev_prev = ev;
        vec_prev = vec;
        if (change <= std::max(opt.tol, floor)) break;
    }

    // p_n(1) > 0, so the sign of sum c_n p_n(1) is the sign of u / sin^lambda near w = 0.
    Eigen::VectorXd p1(N);
    {
        // p_n(1) from the recurrence at t = 1
        p1(0) = p0_value(ell + 1);
        if (N > 1) p1(1) = p1(0) / cos_half_offdiag(ell, 0);
        for (int n = 1; n + 1 < N; ++n)
            p1(n + 1) = (p1(n) - cos_half_offdiag(ell, n - 1) * p1(n - 1)) / cos_half_offdiag(ell, n);
    }
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd c = vec.col(k);
        double lead = c.dot(p1);
        if (lead < 0) c = -c;
        // drop the negligible tail to keep evaluation cheap
        int last = N - 1;
        while (last > 0 && std::fabs(c(last)) < 1e-17) --last;
        RadialEigenpair r;
        r.ell = ell;
        r.alpha = k;
        r.epsilon_tilde = ev(k);
        r.coeffs = c.head(last + 1);
        r.basis_size = N;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace su2dual
