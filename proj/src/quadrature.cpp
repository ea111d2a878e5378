#include "su2dual/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace su2dual {

namespace {
constexpr double kHalfPi = 1.57079632679489661923;
constexpr double kTMax = 6.56;  // complement of the node drops below ~1e-300 here
}  // namespace

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
}

QuadratureRule tanh_sinh_rule(double a, double b, int level) {
    if (!(b > a)) throw std::invalid_argument("tanh_sinh_rule needs b > a");
    if (level < 0) throw std::invalid_argument("tanh_sinh_rule needs level >= 0");
    const double h = std::ldexp(1.0, -level);
    const double half = 0.5 * (b - a);
    QuadratureRule r;
    auto push = [&](double t) {
        const double u = kHalfPi * std::sinh(t);
        const double ch = std::cosh(u);
        // 1 - tanh(u) computed without cancellation
        const double comp = 2.0 / (std::exp(2.0 * std::fabs(u)) + 1.0);
        const double wt = half * h * kHalfPi * std::cosh(t) / (ch * ch);
        double xn;
        if (t >= 0) xn = b - half * comp;
        else xn = a + half * comp;
        if (!(xn > a && xn < b) || !(wt > 0) || !std::isfinite(wt)) return;
        r.x.push_back(xn);
        r.w.push_back(wt);
    };
    push(0.0);
    const int kmax = static_cast<int>(std::ceil(kTMax / h));
    for (int k = 1; k <= kmax; ++k) {
        push(k * h);
        push(-k * h);
    }
    return r;
}

double tanh_sinh_integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           int max_level) {
    double prev = tanh_sinh_rule(a, b, 2).integrate(f);
    for (int level = 3; level <= max_level; ++level) {
        double cur = tanh_sinh_rule(a, b, level).integrate(f);
        if (std::fabs(cur - prev) <= abs_tol) return cur;
        prev = cur;
    }
    throw std::runtime_error("tanh-sinh quadrature did not converge by level " + std::to_string(max_level));
}

}  // namespace su2dual
