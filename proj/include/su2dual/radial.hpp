// Single-loop radial problem
//   -u'' + 1/4 [ l(l+1)/sin^2(w/2) + (1 - cos(w/2))/g^4 - 1 ] u = eps u,
// u(0) = u(2 pi) = 0, solved by Rayleigh-Ritz in the eigenbasis of the
// g -> infinity operator. With x = w/2 and lambda = l + 1 those eigenfunctions
// are phi_n(x) = sin^lambda(x) C_n^lambda(cos x) / sqrt(2 h_n), and the
// potential is tridiagonal in them, so the problem reduces to a symmetric
// tridiagonal eigensolve whose size is doubled until the requested
// eigenvalues stop moving.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace su2dual {

// A positive local coupling g, or the electric limit g -> infinity.
class Coupling {
public:
    static Coupling electric() { return Coupling(); }
    static Coupling finite(double g);

    bool is_electric() const { return electric_; }
    double g() const { return electric_ ? std::numeric_limits<double>::infinity() : g_; }
    double inv_g4() const { return electric_ ? 0.0 : 1.0 / (g_ * g_ * g_ * g_); }
    // g rounded to 12 significant digits, or "inf".
    std::string key() const;

    bool operator==(const Coupling& o) const { return electric_ == o.electric_ && (electric_ || g_ == o.g_); }

private:
    Coupling() = default;
    bool electric_ = true;
    double g_ = 0.0;
};

struct RadialOptions {
    double tol = 1e-13;  // relative change of eigenvalues under basis doubling
    int n_min = 32;
    int n_max = 16384;
};

struct RadialEigenpair {
    int ell = 0;
    int alpha = 0;
    double epsilon_tilde = 0.0;
    Eigen::VectorXd coeffs;  // expansion in phi_n, n = 0..coeffs.size()-1
    int basis_size = 0;      // size of the converged Ritz problem

    double u(double omega) const;
    double du(double omega) const;   // d/d omega
    double d2u(double omega) const;  // d^2/d omega^2
};

// Values of phi_n(x) and their first and second x-derivatives, n < N.
struct GegenbauerValues {
    Eigen::VectorXd phi, dphi, d2phi;
};
GegenbauerValues gegenbauer_phi(int ell, int N, double x);

// Lowest `count` eigenpairs at fixed ell, ascending.
std::vector<RadialEigenpair> solve_radial(int ell, const Coupling& coupling, int count,
                                          const RadialOptions& opt = {});

// Exact g -> infinity eigenvalue of the (ell, alpha) state: j(j+1), 2j = alpha + ell.
double electric_limit_eigenvalue(int ell, int alpha);

// Matrix of cos(x) = cos(w/2) in the phi_n basis (tridiagonal, zero diagonal).
double cos_half_offdiag(int ell, int n);

}  // namespace su2dual
