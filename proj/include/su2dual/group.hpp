// SU(2) in axis-angle coordinates: fundamental representation, Haar weight,
// Clebsch-Gordan coefficients, spherical harmonics and the adjoint
// (parallel-transport) matrix.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace su2dual {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// Omega = (omega, theta, phi) with omega in [0, 2pi], theta in [0, pi],
// phi in [0, 2pi].
struct AxisAngle {
    double omega = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

// Throws std::domain_error when a component is outside its range.
void check_range(const AxisAngle& p);

// Unit rotation axis n(theta, phi).
Vec3 rotation_axis(const AxisAngle& p);

// T^a = sigma^a / 2.
const std::array<Mat2, 3>& su2_generators();

// D(Omega) = cos(omega/2) - i sin(omega/2) n.sigma
Mat2 wigner_d_fundamental(const AxisAngle& p);

// 4 sin^2(omega/2) sin(theta); integrates to 16 pi^2 over the full box.
double haar_weight(const AxisAngle& p);

// <L M | l1 m1, l2 m2> in the Condon-Shortley convention. Evaluated with the
// Racah sum in exact rational arithmetic and cached. Returns 0 when the
// selection rules fail; throws std::domain_error for negative angular momenta.
double clebsch_gordan(int l1, int m1, int l2, int m2, int L, int M);

// Y_lm(theta, phi), orthonormal on the sphere, Condon-Shortley phase.
cplx spherical_harmonic(int l, int m, double theta, double phi);

// d/dtheta Y_lm(theta, phi). Valid for 0 < theta < pi.
cplx spherical_harmonic_dtheta(int l, int m, double theta, double phi);

struct YlmTerm {
    int L;
    int M;
    double coeff;
};

// Y_{l m} Y_{l2 m2} = sum_L coeff Y_{L, m+m2}.
std::vector<YlmTerm> ylm_product_expand(int l, int m, int l2, int m2);

// Adjoint matrix R^{ab}(U) = 2 Tr[U^dag T^a U T^b], decomposed as
//   R = cos(omega) 1 + 2 sin^2(omega/2) R_S + sin(omega) R_A
// with R_S^{ab} = n^a n^b and R_A^{ab} = -eps^{abc} n^c.
struct ParallelTransport {
    Mat3 sym;
    Mat3 anti;
    double c_cos;
    double c_sin2;
    double c_sin;
    Mat3 full() const;
};

ParallelTransport parallel_transport_matrix(const AxisAngle& p);

// Direct evaluation of 2 Tr[U^dag T^a U T^b].
Mat3 transport_from_trace(const Mat2& U);

// Levi-Civita symbol on {0,1,2}.
int levi_civita(int a, int b, int c);

}  // namespace su2dual
