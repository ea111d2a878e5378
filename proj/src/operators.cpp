#include "su2dual/operators.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace su2dual {

namespace {

const cplx kI(0, 1);
const double kSqrtHalf = 0.70710678118654752440;

// n^a = sqrt(4pi/3) sum_q c_q Y_{1q}
struct SphTerm {
    int q;
    cplx c;
};
const std::vector<SphTerm>& axis_components(int a) {
    static const std::array<std::vector<SphTerm>, 3> comps = {
        std::vector<SphTerm>{{-1, kSqrtHalf}, {1, -kSqrtHalf}},
        std::vector<SphTerm>{{-1, kI * kSqrtHalf}, {1, kI * kSqrtHalf}},
        std::vector<SphTerm>{{0, 1.0}},
    };
    return comps[a];
}

// int Y*_{l1 m1} Y_{L M} Y_{l2 m2}
double gaunt(int l1, int m1, int L, int M, int l2, int m2) {
    if (m1 != M + m2) return 0.0;
    for (const auto& t : ylm_product_expand(L, M, l2, m2))
        if (t.L == l1 && t.M == m1) return t.coeff;
    return 0.0;
}

double half_cot(double w) { return std::cos(0.5 * w) / std::sin(0.5 * w); }

}  // namespace

// ---------------------------------------------------------------- quadrature

RadialQuadrature::RadialQuadrature(const LocalBasis& basis, const TableOptions& opt) : basis_(&basis) {
    int c = 0;
    for (const auto& [k, r] : basis.radial) col_[k] = c++;
    tabulate(opt.min_level);
    const int n = static_cast<int>(col_.size());
    auto fingerprint = [&]() {
        Eigen::MatrixXd g(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int i = 0; i < nodes(); ++i) s += rule_.w[i] * (u_(i, a) * u_(i, b) + du_(i, a) * du_(i, b));
                g(a, b) = s;
            }
        return g;
    };
    Eigen::MatrixXd prev = fingerprint();
    for (int level = opt.min_level + 1;; ++level) {
        if (level > opt.max_level)
            throw std::runtime_error("radial quadrature did not converge up to tanh-sinh level " +
                                     std::to_string(opt.max_level));
        tabulate(level);
        Eigen::MatrixXd cur = fingerprint();
        const double scale = std::max(1.0, cur.cwiseAbs().maxCoeff());
        const double diff = (cur - prev).cwiseAbs().maxCoeff();
        prev = cur;
        if (diff <= opt.quad_tol * scale) break;
    }
}

void RadialQuadrature::tabulate(int level) {
    level_ = level;
    rule_ = tanh_sinh_rule(0.0, 2 * kPi, level);
    const int nn = nodes();
    const int nf = static_cast<int>(col_.size());
    u_.resize(nn, nf);
    du_.resize(nn, nf);
    // group radial functions by ell so the Gegenbauer recurrence runs once per node
    std::map<int, int> nmax;
    for (const auto& [k, r] : basis_->radial) nmax[k.first] = std::max(nmax[k.first], static_cast<int>(r.coeffs.size()));
    for (int i = 0; i < nn; ++i) {
        const double x = 0.5 * rule_.x[i];
        for (const auto& [ell, N] : nmax) {
            GegenbauerValues g = gegenbauer_phi(ell, N, x);
            for (const auto& [k, r] : basis_->radial) {
                if (k.first != ell) continue;
                const int m = static_cast<int>(r.coeffs.size());
                const int c = col_.at(k);
                u_(i, c) = r.coeffs.dot(g.phi.head(m));
                du_(i, c) = 0.5 * r.coeffs.dot(g.dphi.head(m));
            }
        }
    }
}

double RadialQuadrature::integrate_dd(const RadialEigenpair& a, const RadialEigenpair& b,
                                      const std::function<double(double)>& k) const {
    const int ca = column(a), cb = column(b);
    double s = 0.0;
    for (int i = 0; i < nodes(); ++i) s += rule_.w[i] * du_(i, ca) * k(rule_.x[i]) * du_(i, cb);
    return s;
}

int RadialQuadrature::column(const RadialEigenpair& r) const { return col_.at({r.ell, r.alpha}); }

double RadialQuadrature::integrate(const RadialEigenpair& a, const RadialEigenpair& b,
                                   const std::function<double(double)>& k) const {
    const int ca = column(a), cb = column(b);
    double s = 0.0;
    for (int i = 0; i < nodes(); ++i) s += rule_.w[i] * u_(i, ca) * k(rule_.x[i]) * u_(i, cb);
    return s;
}

double RadialQuadrature::integrate_d(const RadialEigenpair& a, const RadialEigenpair& b,
                                     const std::function<double(double)>& k) const {
    const int ca = column(a), cb = column(b);
    double s = 0.0;
    for (int i = 0; i < nodes(); ++i) s += rule_.w[i] * u_(i, ca) * k(rule_.x[i]) * du_(i, cb);
    return s;
}

// ---------------------------------------------------------- reduced elements

cplx reduced_L(int alphaI, int ellI, int alphaJ, int ellJ, const LocalBasis&) {
    if (ellI != ellJ || alphaI != alphaJ) return 0.0;
    return -std::sqrt(2.0 * ellJ * (ellJ + 1));
}

cplx reduced_Sigma(int alphaI, int ellI, int alphaJ, int ellJ, const LocalBasis& basis, const RadialQuadrature& q) {
    const auto& bra = basis.radial_of(ellI, alphaI);
    const auto& ket = basis.radial_of(ellJ, alphaJ);
    const double l = ellJ;
    auto one = [](double) { return 1.0; };
    if (ellI == ellJ + 1) {
        const double k = 0.5 * (l + 1);
        const double val = q.integrate_d(bra, ket, one) - k * q.integrate(bra, ket, half_cot);
        return 2.0 * kI * std::sqrt((l + 1) / (2 * l + 3)) * val;
    }
    if (ellI == ellJ - 1) {
        const double k = 0.5 * l;
        const double val = q.integrate_d(bra, ket, one) + k * q.integrate(bra, ket, half_cot);
        return -2.0 * kI * std::sqrt(l / (2 * l - 1)) * val;
    }
    return 0.0;
}

cplx reduced_loop_vector(int alphaI, int ellI, int alphaJ, int ellJ, const LocalBasis& basis,
                         const RadialQuadrature& q) {
    const double l = ellJ;
    double ang;
    if (ellI == ellJ + 1) ang = std::sqrt((l + 1) / (2 * l + 3));
    else if (ellI == ellJ - 1) ang = -std::sqrt(l / (2 * l - 1));
    else return 0.0;
    const double rad = q.integrate(basis.radial_of(ellI, alphaI), basis.radial_of(ellJ, alphaJ),
                                   [](double w) { return std::sin(0.5 * w); });
    return -2.0 * kI * rad * ang;
}

// ------------------------------------------------------------------ assembly

std::array<MatC, 3> cartesian_from_spherical(const MatC& vm1, const MatC& v0, const MatC& vp1) {
    return {(vm1 - vp1) * kSqrtHalf, kI * (vm1 + vp1) * kSqrtHalf, v0};
}

Vec3Op assemble_vector_operator(const ReducedFn& reduced, const LocalBasis& basis) {
    const int n = basis.size();
    std::array<MatC, 3> sph;
    for (auto& m : sph) m = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& bi = basis.labels[i];
        for (int j = 0; j < n; ++j) {
            const auto& bj = basis.labels[j];
            const int q = bi.m - bj.m;
            if (std::abs(q) > 1 || std::abs(bi.ell - bj.ell) > 1) continue;
            const double cg = clebsch_gordan(bj.ell, bj.m, 1, q, bi.ell, bi.m);
            if (cg == 0.0) continue;
            const cplx red = reduced(bi, bj);
            sph[q + 1](i, j) = red * cg;
        }
    }
    return cartesian_from_spherical(sph[0], sph[1], sph[2]);
}

namespace {
Vec3Op sigma_and_L(const LocalBasis& basis, const RadialQuadrature& q, double sigma_sign, double l_sign) {
    // memoise reduced Sigma per (alpha, ell) pair; m does not enter
    std::map<std::array<int, 4>, cplx> memo;
    auto red = [&](const BasisLabel& a, const BasisLabel& b) -> cplx {
        cplx v = 0.0;
        if (a.ell == b.ell) {
            if (a.alpha == b.alpha) v += l_sign * std::sqrt(a.ell * (a.ell + 1.0));
        } else {
            std::array<int, 4> key{a.alpha, a.ell, b.alpha, b.ell};
            auto it = memo.find(key);
            if (it == memo.end()) it = memo.emplace(key, reduced_Sigma(a.alpha, a.ell, b.alpha, b.ell, basis, q)).first;
            v += sigma_sign * it->second;
        }
        return v;
    };
    return assemble_vector_operator(red, basis);
}
}  // namespace

Vec3Op electric_left(const LocalBasis& basis, const RadialQuadrature& q) { return sigma_and_L(basis, q, -1.0, 1.0); }

Vec3Op electric_right(const LocalBasis& basis, const RadialQuadrature& q) { return sigma_and_L(basis, q, 1.0, 1.0); }

MatC casimir(const LocalBasis& basis) {
    const int n = basis.size();
    MatC c = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& a = basis.labels[i];
            const auto& b = basis.labels[j];
            if (a.ell != b.ell || a.m != b.m) continue;
            const auto& ra = basis.radial_of(a);
            const auto& rb = basis.radial_of(b);
            const int len = std::min(ra.coeffs.size(), rb.coeffs.size());
            double s = 0.0;
            for (int k = 0; k < len; ++k) {
                const double kk = k + a.ell + 1.0;
                s += ra.coeffs(k) * rb.coeffs(k) * (kk * kk - 1.0);
            }
            c(i, j) = s;
        }
    return c;
}

MatC el_er_product(const LocalBasis& basis) {
    MatC m = -casimir(basis);
    for (int i = 0; i < basis.size(); ++i) {
        const double l = basis.labels[i].ell;
        m(i, i) += 2.0 * l * (l + 1.0);
    }
    return m;
}

MatC el_er_product_quadrature(const LocalBasis& basis, const RadialQuadrature& q) {
    const int n = basis.size();
    MatC m = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& a = basis.labels[i];
            const auto& b = basis.labels[j];
            if (a.ell != b.ell || a.m != b.m) continue;
            const double ll = a.ell * (a.ell + 1.0);
            const auto& ra = basis.radial_of(a);
            const auto& rb = basis.radial_of(b);
            // u'' from the series; the cot^2 term is finite because u ~ sin^(l+1)
            double v = q.integrate(ra, rb, [ll](double w) {
                const double c = half_cot(w);
                return 1.0 - ll * c * c;
            });
            // 4 int u_a u_b'' = -4 int u_a' u_b' (boundary terms vanish)
            const double d2 = -q.integrate_dd(ra, rb, [](double) { return 1.0; });
            v += 4.0 * d2;
            if (a.alpha == b.alpha) v += ll;
            m(i, j) = v;
        }
    return m;
}

MatC loop_scalar(const LocalBasis& basis) {
    const int n = basis.size();
    MatC s = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& a = basis.labels[i];
            const auto& b = basis.labels[j];
            if (a.ell != b.ell || a.m != b.m) continue;
            const auto& ca = basis.radial_of(a).coeffs;
            const auto& cb = basis.radial_of(b).coeffs;
            double v = 0.0;
            for (int k = 0; k < ca.size() && k + 1 < cb.size(); ++k) v += ca(k) * cb(k + 1) * cos_half_offdiag(a.ell, k);
            for (int k = 0; k < cb.size() && k + 1 < ca.size(); ++k) v += cb(k) * ca(k + 1) * cos_half_offdiag(a.ell, k);
            s(i, j) = v;
        }
    return s;
}

MatC loop_scalar_quadrature(const LocalBasis& basis, const RadialQuadrature& q) {
    const int n = basis.size();
    MatC s = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& a = basis.labels[i];
            const auto& b = basis.labels[j];
            if (a.ell != b.ell || a.m != b.m) continue;
            s(i, j) = q.integrate(basis.radial_of(a), basis.radial_of(b), [](double w) { return std::cos(0.5 * w); });
        }
    return s;
}

Vec3Op loop_vector(const LocalBasis& basis, const RadialQuadrature& q) {
    std::map<std::array<int, 4>, cplx> memo;
    auto red = [&](const BasisLabel& a, const BasisLabel& b) -> cplx {
        if (std::abs(a.ell - b.ell) != 1) return 0.0;
        std::array<int, 4> key{a.alpha, a.ell, b.alpha, b.ell};
        auto it = memo.find(key);
        if (it == memo.end())
            it = memo.emplace(key, reduced_loop_vector(a.alpha, a.ell, b.alpha, b.ell, basis, q)).first;
        return it->second;
    };
    return assemble_vector_operator(red, basis);
}

cplx angular_n(int a, int l1, int m1, int l2, int m2) {
    const double pre = std::sqrt(4 * kPi / 3);
    cplx s = 0.0;
    for (const auto& t : axis_components(a)) s += t.c * gaunt(l1, m1, 1, t.q, l2, m2);
    return pre * s;
}

cplx angular_nn(int a, int b, int l1, int m1, int l2, int m2) {
    const double pre = 4 * kPi / 3;
    cplx s = 0.0;
    for (const auto& ta : axis_components(a))
        for (const auto& tb : axis_components(b))
            for (const auto& y : ylm_product_expand(1, ta.q, 1, tb.q))
                s += ta.c * tb.c * y.coeff * gaunt(l1, m1, y.L, y.M, l2, m2);
    return pre * s;
}

TransportOp transport_elements(const LocalBasis& basis, const RadialQuadrature& q) {
    const int n = basis.size();
    TransportOp R;
    for (auto& row : R)
        for (auto& m : row) m = MatC::Zero(n, n);
    auto kcos = [](double w) { return std::cos(w); };
    auto ksin2 = [](double w) {
        const double s = std::sin(0.5 * w);
        return 2 * s * s;
    };
    auto ksin = [](double w) { return std::sin(w); };
    std::map<std::array<int, 5>, double> memo;
    auto radial = [&](int kind, const BasisLabel& x, const BasisLabel& y) {
        std::array<int, 5> key{kind, x.ell, x.alpha, y.ell, y.alpha};
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const auto& rx = basis.radial_of(x);
        const auto& ry = basis.radial_of(y);
        double v = kind == 0 ? q.integrate(rx, ry, kcos) : kind == 1 ? q.integrate(rx, ry, ksin2) : q.integrate(rx, ry, ksin);
        memo.emplace(key, v);
        return v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& x = basis.labels[i];
            const auto& y = basis.labels[j];
            const int dl = std::abs(x.ell - y.ell);
            if (dl > 2 || std::abs(x.m - y.m) > 2) continue;
            const double rc = (x.ell == y.ell && x.m == y.m) ? radial(0, x, y) : 0.0;
            const double rs2 = (dl != 1) ? radial(1, x, y) : 0.0;
            const double rs = (dl == 1) ? radial(2, x, y) : 0.0;
            std::array<cplx, 3> an{};
            if (dl == 1)
                for (int c = 0; c < 3; ++c) an[c] = angular_n(c, x.ell, x.m, y.ell, y.m);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    cplx v = (a == b) ? cplx(rc) : cplx(0.0);
                    if (dl != 1 && rs2 != 0.0) v += rs2 * angular_nn(a, b, x.ell, x.m, y.ell, y.m);
                    if (dl == 1)
                        for (int c = 0; c < 3; ++c)
                            if (levi_civita(a, b, c)) v -= rs * static_cast<double>(levi_civita(a, b, c)) * an[c];
                    R[a][b](i, j) = v;
                }
        }
    return R;
}

LoopOperatorTable build_operator_table(const LocalBasis& basis, const TableOptions& opt) {
    LoopOperatorTable t;
    t.basis = basis;
    RadialQuadrature q(t.basis, opt);
    t.quad_level = q.level();
    t.S = loop_scalar(t.basis);
    t.casimir = casimir(t.basis);
    t.el_er = el_er_product(t.basis);
    t.W = loop_vector(t.basis, q);
    t.EL = electric_left(t.basis, q);
    t.ER = electric_right(t.basis, q);
    t.R = transport_elements(t.basis, q);
    return t;
}

// ----------------------------------------------------------------- caching

namespace {
constexpr std::uint32_t kMagic = 0x53553244;  // "SU2D"
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}
void put_mat(std::ostream& os, const MatC& m) {
    put<std::int32_t>(os, static_cast<std::int32_t>(m.rows()));
    put<std::int32_t>(os, static_cast<std::int32_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(m.data()), sizeof(cplx) * m.size());
}
bool get_mat(std::istream& is, MatC& m) {
    std::int32_t r = 0, c = 0;
    if (!get(is, r) || !get(is, c) || r < 0 || c < 0) return false;
    m.resize(r, c);
    return static_cast<bool>(is.read(reinterpret_cast<char*>(m.data()), sizeof(cplx) * m.size()));
}
}  // namespace

void save_table(const LoopOperatorTable& t, const std::string& key, std::ostream& os) {
    put(os, kMagic);
    put(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(key.size()));
    os.write(key.data(), static_cast<std::streamsize>(key.size()));
    const auto& b = t.basis;
    put<std::int32_t>(os, b.coupling.is_electric() ? 1 : 0);
    put<double>(os, b.coupling.is_electric() ? 0.0 : b.coupling.g());
    put<std::int32_t>(os, b.size());
    for (int i = 0; i < b.size(); ++i) {
        put<std::int32_t>(os, b.labels[i].alpha);
        put<std::int32_t>(os, b.labels[i].ell);
        put<std::int32_t>(os, b.labels[i].m);
        put<double>(os, b.eps[i]);
    }
    put<std::int32_t>(os, static_cast<std::int32_t>(b.radial.size()));
    for (const auto& [k, r] : b.radial) {
        put<std::int32_t>(os, r.ell);
        put<std::int32_t>(os, r.alpha);
        put<std::int32_t>(os, r.basis_size);
        put<double>(os, r.epsilon_tilde);
        put<std::int32_t>(os, static_cast<std::int32_t>(r.coeffs.size()));
        os.write(reinterpret_cast<const char*>(r.coeffs.data()), sizeof(double) * r.coeffs.size());
    }
    put<std::int32_t>(os, t.quad_level);
    put_mat(os, t.S);
    put_mat(os, t.casimir);
    put_mat(os, t.el_er);
    for (const auto& m : t.W) put_mat(os, m);
    for (const auto& m : t.EL) put_mat(os, m);
    for (const auto& m : t.ER) put_mat(os, m);
    for (const auto& row : t.R)
        for (const auto& m : row) put_mat(os, m);
}

bool load_table(LoopOperatorTable& t, const std::string& key, std::istream& is) {
    std::uint32_t magic = 0, version = 0, klen = 0;
    if (!get(is, magic) || magic != kMagic || !get(is, version) || version != kVersion || !get(is, klen)) return false;
    std::string k(klen, '\0');
    if (!is.read(k.data(), klen) || k != key) return false;
    std::int32_t electric = 0, n = 0, nr = 0;
    double g = 0.0;
    if (!get(is, electric) || !get(is, g) || !get(is, n) || n < 0) return false;
    LoopOperatorTable out;
    out.basis.coupling = electric ? Coupling::electric() : Coupling::finite(g);
    for (int i = 0; i < n; ++i) {
        std::int32_t a, l, m;
        double e;
        if (!get(is, a) || !get(is, l) || !get(is, m) || !get(is, e)) return false;
        out.basis.labels.push_back({a, l, m});
        out.basis.eps.push_back(e);
    }
    if (!get(is, nr) || nr < 0) return false;
    for (int i = 0; i < nr; ++i) {
        RadialEigenpair r;
        std::int32_t len = 0;
        if (!get(is, r.ell) || !get(is, r.alpha) || !get(is, r.basis_size) || !get(is, r.epsilon_tilde) ||
            !get(is, len) || len < 0)
            return false;
        r.coeffs.resize(len);
        if (!is.read(reinterpret_cast<char*>(r.coeffs.data()), sizeof(double) * len)) return false;
        out.basis.radial.emplace(std::make_pair(r.ell, r.alpha), std::move(r));
    }
    if (!get(is, out.quad_level)) return false;
    if (!get_mat(is, out.S) || !get_mat(is, out.casimir) || !get_mat(is, out.el_er)) return false;
    for (auto& m : out.W)
        if (!get_mat(is, m)) return false;
    for (auto& m : out.EL)
        if (!get_mat(is, m)) return false;
    for (auto& m : out.ER)
        if (!get_mat(is, m)) return false;
    for (auto& row : out.R)
        for (auto& m : row)
            if (!get_mat(is, m)) return false;
    t = std::move(out);
    return true;
}

}  // namespace su2dual
