#include "su2dual/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace su2dual {

namespace {

void fix_phase(VecC& v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    const cplx p = v(k) / std::abs(v(k));
    v /= p;
    v(k) = std::abs(v(k));
}

double residual_of(const SpMat& H, const VecC& v, double e) { return (H * v - e * v).norm(); }

}  // namespace

GroundStateResult ground_state_dense(const SpMat& H) {
    const lapack_int n = static_cast<lapack_int>(H.rows());
    if (n == 0) throw std::invalid_argument("empty Hamiltonian");
    MatC a = MatC(H);
    std::vector<double> w(n);
    MatC z(n, 1);
    std::vector<lapack_int> isuppz(2);
    lapack_int m = 0;
    lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0, &m,
                                     w.data(), z.data(), n, isuppz.data());
    if (info != 0 || m != 1) throw SolverError("zheevr failed with info " + std::to_string(info), -1.0);
    GroundStateResult r;
    r.energy = w[0];
    r.psi = z.col(0);
    r.psi.normalize();
    fix_phase(r.psi);
    r.residual = residual_of(H, r.psi, r.energy);
    r.iterations = 1;
    r.method = "dense";
    return r;
}

GroundStateResult ground_state_lanczos(const SpMat& H, const SolverOptions& opt) {
    const Eigen::Index n = H.rows();
    if (n == 0) throw std::invalid_argument("empty Hamiltonian");
    if (n == 1) return ground_state_dense(H);
    const int m = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, n));

    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> nd;
    VecC v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
    v.normalize();

    GroundStateResult r;
    r.method = "lanczos";
    double res = 0.0;
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        MatC V(n, m);
        std::vector<double> alpha, beta;
        V.col(0) = v;
        int k = 0;
        for (; k < m; ++k) {
            VecC w = H * V.col(k);
            const double a = std::real(V.col(k).dot(w));
            alpha.push_back(a);
            w -= a * V.col(k);
            if (k > 0) w -= beta[k - 1] * V.col(k - 1);
            for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
            const double b = w.norm();
            ++r.iterations;
            if (k + 1 == m) break;
            if (b < 1e-13 * std::max(1.0, std::abs(a))) {
                ++k;
                break;
            }
            beta.push_back(b);
            V.col(k + 1) = w / b;
        }
        const int dim = static_cast<int>(alpha.size());
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), dim);
        Eigen::VectorXd e(std::max(dim - 1, 0));
        for (int i = 0; i + 1 < dim; ++i) e(i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const double theta = es.eigenvalues()(0);
        VecC y = V.leftCols(dim) * es.eigenvectors().col(0).cast<cplx>();
        y.normalize();
        res = residual_of(H, y, theta);
        v = y;
        r.energy = theta;
        if (res <= opt.tol * std::max(1.0, std::abs(theta))) {
            fix_phase(v);
            r.psi = v;
            r.residual = residual_of(H, v, theta);
            return r;
        }
    }
    throw SolverError("Lanczos did not converge, residual " + std::to_string(res), res);
}

GroundStateResult ground_state(const SpMat& H, const SolverOptions& opt) {
    if (H.rows() != H.cols()) throw std::invalid_argument("Hamiltonian is not square");
    return H.rows() < opt.dense_threshold ? ground_state_dense(H) : ground_state_lanczos(H, opt);
}

GroundStateResult ground_state(const DualHamiltonian& H, const SolverOptions& opt) {
    GroundStateResult r = ground_state(H.H, opt);
    r.config = H.config;
    return r;
}

}  // namespace su2dual
