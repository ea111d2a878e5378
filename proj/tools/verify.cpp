#include "verify.hpp"

#include <sstream>

#include "output.hpp"
#include "su2dual/dualizer.hpp"
#include "su2dual/observables.hpp"
#include "su2dual/oracle.hpp"

namespace su2dual::cli {

namespace sym = su2dual::symbolic;

namespace {

const char* mark(bool ok) { return ok ? "ok  " : "FAIL"; }

void identity_lines(std::ostream& os, const std::vector<sym::IdentityCheck>& cs) {
    for (const auto& c : cs) {
        os << "  " << mark(c.holds) << ' ' << c.name << ": " << c.lhs << " = " << c.rhs << "  [trace "
           << c.trace_length << "]\n";
        if (!c.holds) os << "       residue: " << c.residue << '\n';
    }
}

}  // namespace

VerifyResult verify_gauss() {
    const auto d = sym::dualize_minimal_torus();
    const auto rep = sym::verify_gauss_laws(d);
    std::ostringstream os;
    os << "dual Gauss laws on the 2x2 torus (" << d.state.ct_count() << " CTs)\n";
    for (const auto& c : rep.checks) {
        os << "  " << mark(c.passed()) << " G(" << c.site << ") with " << c.rules << ": "
           << (c.reduced ? "reduces to 0" : "leaves a residue") << (c.expected ? "" : " (control)") << "  [trace "
           << c.steps << "]\n";
        if (!c.passed()) os << "       residue: " << c.residue << '\n';
    }
    os << (rep.all_reduced ? "gauss: all checks passed\n" : "gauss: FAILED\n");
    return {rep.all_reduced, os.str(), sym::to_json(rep)};
}

VerifyResult verify_links() {
    const auto d = sym::dualize_minimal_torus();
    std::ostringstream os;
    os << "inverse link relations\n";
    identity_lines(os, d.link_relations);
    os << "dual field definitions\n";
    identity_lines(os, d.field_definitions);
    bool ok = d.all_links_recovered && d.strings_form_maximal_tree;
    for (const auto& c : d.field_definitions) ok = ok && c.holds;
    os << "  " << mark(d.strings_form_maximal_tree) << " open strings form a maximal tree\n";
    os << "  " << mark(d.all_links_recovered) << " every link recovered from loops and strings\n";
    // The plaquette at D is reported, not asserted: its word differs from Tr(W_A W_B W_C).
    os << "plaquette D (informational)\n";
    for (const auto* c : {&d.plaquette_d, &d.plaquette_d_trivial})
        os << "  " << (c->holds ? "holds " : "differs") << ' ' << c->name << (c->holds ? "" : ": residue " + c->residue)
           << '\n';
    os << (ok ? "links: all checks passed\n" : "links: FAILED\n");
    return {ok, os.str(), sym::to_json(d)};
}

VerifyResult verify_wigner_eckart(int samples, std::uint64_t seed, double tol) {
    const auto rep = wigner_eckart_oracle(samples, seed);
    std::ostringstream os;
    int bad = 0;
    for (const auto& s : rep.samples)
        if (s.deviation >= tol) {
            ++bad;
            os << "  FAIL " << s.coupling << ' ' << oracle_op_name(s.op) << " a=" << s.a << " b=" << s.b << " <"
               << s.i << "|.|" << s.j << ">: assembled " << num(s.assembled.real()) << "+" << num(s.assembled.imag())
               << "i, quadrature " << num(s.quadrature.real()) << "+" << num(s.quadrature.imag()) << "i\n";
        }
    const bool ok = rep.passed(tol);
    os << "wigner-eckart: " << rep.samples.size() - bad << "/" << rep.samples.size()
       << " samples agree, max deviation " << num(rep.max_deviation) << " (tolerance " << num(tol) << ")\n";
    auto j = to_json(rep);
    j["tolerance"] = tol;
    j["seed"] = seed;
    return {ok, os.str(), j};
}

VerifyResult verify_dof(int nx, int ny) {
    std::vector<std::pair<int, int>> sizes;
    if (nx == 0 && ny == 0) {
        for (int x = 2; x <= 6; ++x)
            for (int y = 2; y <= 6; ++y) sizes.push_back({x, y});
    } else {
        sizes.push_back({nx, ny});
    }
    std::ostringstream os;
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (auto [x, y] : sizes) {
        const auto c = sym::torus_dof_count(x, y);
        const bool good = c.ok() && c.loops == x * y + 1 && c.strings == x * y - 1;
        ok = ok && good;
        os << "  " << mark(good) << ' ' << x << 'x' << y << ": loops " << c.loops << ", strings " << c.strings
           << ", CTs " << c.ct_count << ", cycle rank " << c.cycle_rank << (c.maximal_tree ? ", maximal tree" : "")
           << (c.gauss_preserved ? ", Gauss preserved" : "") << '\n';
        arr.push_back(sym::to_json(c));
    }
    os << (ok ? "dof: all counts match (NxNy+1, NxNy-1)\n" : "dof: FAILED\n");
    return {ok, os.str(), {{"lattices", arr}, {"all_passed", ok}}};
}

VerifyResult verify_invariants() {
    std::ostringstream os;
    nlohmann::json j = nlohmann::json::object();
    bool ok = true;
    TableCache cache;

    // Hermiticity over a few representative configurations.
    double worst = 0.0;
    for (double beta : {0.01, 1.0, 100.0}) {
        CouplingConfig c;
        c.beta = beta;
        c.locals = initial_ansatz(beta);
        c.trunc = {3, 3, 3, 2, 2};
        const auto h = assemble_full(c, cache);
        worst = std::max(worst, hermiticity_defect(h.H));
    }
    const bool herm = worst < 1e-12;
    ok = ok && herm;
    os << "  " << mark(herm) << " Hermiticity: max |H - H^dag| = " << num(worst) << '\n';
    j["hermiticity_defect"] = worst;

    // E_L.E_L = E_R.E_R on bases made of whole multiplets.
    double cas = 0.0;
    for (auto c : {Coupling::finite(0.7), Coupling::finite(2.0), Coupling::electric()}) {
        int lmax = 10;
        while (!build_local_basis(c, lmax).complete_multiplets()) ++lmax;
        const auto t = cache.get(c, lmax);
        MatC l = MatC::Zero(t->size(), t->size()), r = l;
        for (int a = 0; a < 3; ++a) {
            l += t->EL[a] * t->EL[a];
            r += t->ER[a] * t->ER[a];
        }
        cas = std::max(cas, (l - r).cwiseAbs().maxCoeff());
    }
    const bool casimir_ok = cas < 1e-10;
    ok = ok && casimir_ok;
    os << "  " << mark(casimir_ok) << " Casimir: max |E_L.E_L - E_R.E_R| = " << num(cas) << '\n';
    j["casimir_defect"] = cas;

    // Large-loop fields at beta = 1, truncation (2,2,2,2,2).
    CouplingConfig c;
    c.beta = 1.0;
    c.locals = initial_ansatz(1.0);
    c.trunc = {2, 2, 2, 2, 2};
    const auto norms = large_loop_commutator_norms(c, cache);
    nlohmann::json cj = nlohmann::json::array();
    const char* names[2] = {"L_x", "L_y"};
    for (int k = 0; k < 2; ++k) {
        const bool loc = norms[k].electric_local < 1e-8 && norms[k].magnetic < 1e-8;
        ok = ok && loc;
        os << "  " << mark(loc) << " [H_E,loc, E(" << names[k] << ")] = " << num(norms[k].electric_local)
           << ", [H_B, E(" << names[k] << ")] = " << num(norms[k].magnetic) << '\n';
        os << "       [H, E(" << names[k] << ")] = " << num(norms[k].full)
           << ", [H_E,nloc, E(" << names[k] << ")] = " << num(norms[k].electric_nonlocal) << '\n';
        cj.push_back({{"loop", names[k]},
                      {"full", norms[k].full},
                      {"electric_local", norms[k].electric_local},
                      {"electric_nonlocal", norms[k].electric_nonlocal},
                      {"magnetic", norms[k].magnetic}});
    }
    j["commutators"] = cj;
    j["all_passed"] = ok;
    os << (ok ? "invariants: all checks passed\n" : "invariants: FAILED\n");
    return {ok, os.str(), j};
}

}  // namespace su2dual::cli
