// Single-loop operator matrices in a truncated LocalBasis.
//
// Conventions. Wave functions are psi = u(w) Y_lm / (2 sin(w/2)) with
// int u^2 dw = 1 and Haar measure 4 sin^2(w/2) sin(theta). Electric fields are
// the differential operators
//   E_L = -Sigma + L,   E_R = Sigma + L,
// normalised so that E_L.E_L = E_R.E_R has eigenvalue 4 j(j+1). E_R carries the
// sign that makes E_R^a = -R^{ba}(U) E_L^b, i.e. E_R = -U^dag E_L U. The loop is
// W = S 1 + W^a T^a with S = cos(w/2) and W^a = -2i sin(w/2) n^a, and
// R^{ab}(U) = 2 Tr[U^dag T^a U T^b].
//
// Vector operators are assembled with the Wigner-Eckart theorem in the form
//   <l' m'| V_q |l m> = <l'||V||l> <l m, 1 q | l' m'>
// and converted to Cartesian components with V_{+-1} = -+(V_x +- i V_y)/sqrt 2.
#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "su2dual/basis.hpp"
#include "su2dual/group.hpp"
#include "su2dual/quadrature.hpp"

namespace su2dual {

using MatC = Eigen::MatrixXcd;
using Vec3Op = std::array<MatC, 3>;

struct TableOptions {
    double quad_tol = 1e-12;  // agreement between successive tanh-sinh levels
    int min_level = 5;
    int max_level = 13;
};

// All radial functions of a basis tabulated on one tanh-sinh rule over (0, 2pi).
class RadialQuadrature {
public:
    RadialQuadrature(const LocalBasis& basis, const TableOptions& opt = {});

    int level() const { return level_; }
    int nodes() const { return static_cast<int>(rule_.x.size()); }
    // int u_a(w) k(w) u_b(w) dw
    double integrate(const RadialEigenpair& a, const RadialEigenpair& b,
                     const std::function<double(double)>& k) const;
    // int u_a(w) k(w) u_b'(w) dw
    double integrate_d(const RadialEigenpair& a, const RadialEigenpair& b,
                       const std::function<double(double)>& k) const;
    // int u_a'(w) k(w) u_b'(w) dw
    double integrate_dd(const RadialEigenpair& a, const RadialEigenpair& b,
                        const std::function<double(double)>& k) const;

private:
    int column(const RadialEigenpair& r) const;
    void tabulate(int level);

    const LocalBasis* basis_;
    std::map<std::pair<int, int>, int> col_;
    QuadratureRule rule_;
    Eigen::MatrixXd u_, du_;
    int level_ = 0;
};

// Reduced elements <alphaI lI || X || alphaJ lJ>.
// reduced_L follows the ladder-operator normalisation (L_+ in place of the
// spherical component), giving -sqrt(2 l (l+1)); the assembly uses the
// spherical-component value sqrt(l (l+1)) = -reduced_L / sqrt 2.
cplx reduced_L(int alphaI, int ellI, int alphaJ, int ellJ, const LocalBasis& basis);
cplx reduced_Sigma(int alphaI, int ellI, int alphaJ, int ellJ, const LocalBasis& basis, const RadialQuadrature& q);
cplx reduced_loop_vector(int alphaI, int ellI, int alphaJ, int ellJ, const LocalBasis& basis,
                         const RadialQuadrature& q);

using ReducedFn = std::function<cplx(const BasisLabel& bra, const BasisLabel& ket)>;
// Cartesian components of the vector operator with the given reduced elements.
Vec3Op assemble_vector_operator(const ReducedFn& reduced, const LocalBasis& basis);

// Cartesian components (x, y, z) from spherical ones (-1, 0, +1).
std::array<MatC, 3> cartesian_from_spherical(const MatC& vm1, const MatC& v0, const MatC& vp1);

Vec3Op electric_left(const LocalBasis& basis, const RadialQuadrature& q);
Vec3Op electric_right(const LocalBasis& basis, const RadialQuadrature& q);

// Casimir E.E from the Ritz coefficients (exact in the converged radial basis).
MatC casimir(const LocalBasis& basis);
// E_L.E_R = 2 L^2 - E.E, diagonal in (l, m).
MatC el_er_product(const LocalBasis& basis);
// The same operator from the second-order differential form
//   E_L.E_R = l(l+1) delta + int u (1 + 4 d^2 - l(l+1) cot^2(w/2)) u dw,
// evaluated by quadrature; used as an independent check.
MatC el_er_product_quadrature(const LocalBasis& basis, const RadialQuadrature& q);

MatC loop_scalar(const LocalBasis& basis);
MatC loop_scalar_quadrature(const LocalBasis& basis, const RadialQuadrature& q);
Vec3Op loop_vector(const LocalBasis& basis, const RadialQuadrature& q);

using TransportOp = std::array<std::array<MatC, 3>, 3>;
TransportOp transport_elements(const LocalBasis& basis, const RadialQuadrature& q);

// Angular integrals int Y*_{l'm'} n^a Y_{lm} and int Y*_{l'm'} n^a n^b Y_{lm}.
cplx angular_n(int a, int l1, int m1, int l2, int m2);
cplx angular_nn(int a, int b, int l1, int m1, int l2, int m2);

struct LoopOperatorTable {
    LocalBasis basis;
    MatC S, casimir, el_er;
    Vec3Op W, EL, ER;
    TransportOp R;
    int quad_level = 0;

    int size() const { return basis.size(); }
};

LoopOperatorTable build_operator_table(const LocalBasis& basis, const TableOptions& opt = {});

// Binary cache of a table; the key string must match on load.
void save_table(const LoopOperatorTable& t, const std::string& key, std::ostream& os);
bool load_table(LoopOperatorTable& t, const std::string& key, std::istream& is);

}  // namespace su2dual
