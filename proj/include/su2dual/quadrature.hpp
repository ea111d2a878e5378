// Tanh-sinh (double exponential) rule on a finite interval.
#pragma once

#include <functional>
#include <vector>

namespace su2dual {

struct QuadratureRule {
    std::vector<double> x;  // nodes, strictly inside (a, b)
    std::vector<double> w;  // weights

    double integrate(const std::function<double(double)>& f) const;
};

// Nodes x_k = c + h tanh(pi/2 sinh(k 2^-level)) over all k whose node is
// still distinguishable from the endpoints. Levels are nested: every node of
// level L is also a node of level L+1.
QuadratureRule tanh_sinh_rule(double a, double b, int level);

// Integrates f on (a, b), refining the level until successive estimates agree
// to abs_tol. Throws std::runtime_error when max_level is reached first.
double tanh_sinh_integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                           int max_level = 12);

}  // namespace su2dual
