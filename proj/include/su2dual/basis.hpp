// Truncated single-loop basis |alpha_l, l, m> ordered by radial eigenvalue.
#pragma once

#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "su2dual/radial.hpp"

namespace su2dual {

struct BasisLabel {
    int alpha = 0;
    int ell = 0;
    int m = 0;
    bool operator==(const BasisLabel& o) const { return alpha == o.alpha && ell == o.ell && m == o.m; }
};

struct LocalBasis {
    Coupling coupling = Coupling::electric();
    std::vector<BasisLabel> labels;
    std::vector<double> eps;  // radial eigenvalue of each label
    std::map<std::pair<int, int>, RadialEigenpair> radial;  // keyed by (ell, alpha)

    int size() const { return static_cast<int>(labels.size()); }
    const RadialEigenpair& radial_of(int ell, int alpha) const;
    const RadialEigenpair& radial_of(const BasisLabel& b) const { return radial_of(b.ell, b.alpha); }
    // True when every (alpha, ell) present carries its full m-multiplet.
    bool complete_multiplets() const;
};

// Relative gap below which two radial eigenvalues count as degenerate.
inline constexpr double kDegeneracyTol = 1e-9;

// The L_max lowest states. Degenerate levels are ordered by descending ell,
// then ascending m, then ascending alpha; descending ell is the order the
// levels take at large finite g, so the electric limit stays continuous.
LocalBasis build_local_basis(const Coupling& coupling, int lmax, const RadialOptions& opt = {});

// Position of a label in the basis; throws std::out_of_range if absent.
int fock_index(const BasisLabel& label, const LocalBasis& basis);
BasisLabel fock_label(int index, const LocalBasis& basis);

// CSV with columns omega,u_<alpha>_<ell>,... for each distinct radial function.
void write_basis_csv(const LocalBasis& basis, std::ostream& os, int npoints = 513);

}  // namespace su2dual
