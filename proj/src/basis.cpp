#include "su2dual/basis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

namespace su2dual {

const RadialEigenpair& LocalBasis::radial_of(int ell, int alpha) const {
    auto it = radial.find({ell, alpha});
    if (it == radial.end())
        throw std::out_of_range("no radial function for ell=" + std::to_string(ell) + " alpha=" + std::to_string(alpha));
    return it->second;
}

bool LocalBasis::complete_multiplets() const {
    std::map<std::pair<int, int>, int> count;
    for (const auto& b : labels) ++count[{b.ell, b.alpha}];
    for (const auto& [k, c] : count)
        if (c != 2 * k.first + 1) return false;
    return true;
}

LocalBasis build_local_basis(const Coupling& coupling, int lmax, const RadialOptions& opt) {
    if (lmax < 1) throw std::invalid_argument("L_max must be >= 1");
    struct Cand {
        double eps;
        int ell;
        int alpha;
    };
    std::vector<Cand> cands;
    std::map<std::pair<int, int>, RadialEigenpair> pool;
    // Eigenvalue at which the running state count (with m-degeneracy) reaches L_max.
    auto cutoff = [&]() {
        std::vector<std::pair<double, int>> levels;
        for (const auto& c : cands) levels.push_back({c.eps, 2 * c.ell + 1});
        std::sort(levels.begin(), levels.end());
        int n = 0;
        for (const auto& [e, mult] : levels) {
            n += mult;
            if (n >= lmax) return e;
        }
        return std::numeric_limits<double>::infinity();
    };
    for (int ell = 0;; ++ell) {
        // the g -> infinity diagonal bounds the lowest eigenvalue at this ell from below
        const double lower = ell * (ell + 2.0) / 4.0;
        if (!cands.empty() && lower > cutoff() * (1 + kDegeneracyTol) + kDegeneracyTol) break;
        const int count = (lmax + 2 * ell) / (2 * ell + 1);
        auto pairs = solve_radial(ell, coupling, count, opt);
        for (auto& p : pairs) {
            cands.push_back({p.epsilon_tilde, ell, p.alpha});
            pool.emplace(std::make_pair(ell, p.alpha), std::move(p));
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.eps < b.eps; });
    // group near-degenerate levels, then apply the tie-break inside each group
    std::vector<BasisLabel> labels;
    std::vector<double> eps;
    for (std::size_t i = 0; i < cands.size();) {
        std::size_t j = i + 1;
        while (j < cands.size() &&
               std::fabs(cands[j].eps - cands[i].eps) <= kDegeneracyTol * std::max(1.0, std::fabs(cands[i].eps)))
            ++j;
        std::vector<Cand> group(cands.begin() + i, cands.begin() + j);
        std::sort(group.begin(), group.end(), [](const Cand& a, const Cand& b) {
            if (a.ell != b.ell) return a.ell > b.ell;
            return a.alpha < b.alpha;
        });
        // expand m inside the group: descending ell, ascending m, ascending alpha
        for (const auto& c : group)
            for (int m = -c.ell; m <= c.ell; ++m) {
                labels.push_back({c.alpha, c.ell, m});
                eps.push_back(c.eps);
            }
        i = j;
        if (static_cast<int>(labels.size()) >= lmax) break;
    }
    labels.resize(lmax);
    eps.resize(lmax);

    LocalBasis basis;
    basis.coupling = coupling;
    basis.labels = std::move(labels);
    basis.eps = std::move(eps);
    for (const auto& b : basis.labels) basis.radial.emplace(std::make_pair(b.ell, b.alpha), pool.at({b.ell, b.alpha}));
    return basis;
}

int fock_index(const BasisLabel& label, const LocalBasis& basis) {
    for (int i = 0; i < basis.size(); ++i)
        if (basis.labels[i] == label) return i;
    throw std::out_of_range("label not present in local basis");
}

BasisLabel fock_label(int index, const LocalBasis& basis) {
    if (index < 0 || index >= basis.size()) throw std::out_of_range("Fock index out of range");
    return basis.labels[index];
}

void write_basis_csv(const LocalBasis& basis, std::ostream& os, int npoints) {
    os << "omega";
    for (const auto& [k, r] : basis.radial) os << ",u_" << k.second << "_" << k.first;
    os << "\n" << std::setprecision(12);
    for (int i = 0; i < npoints; ++i) {
        const double w = 2 * 3.14159265358979323846 * i / (npoints - 1);
        os << w;
        for (const auto& [k, r] : basis.radial) os << "," << r.u(w);
        os << "\n";
    }
}

}  // namespace su2dual
