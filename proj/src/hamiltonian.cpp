#include "su2dual/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace su2dual {

namespace {

const cplx kI(0, 1);

struct Entry {
    int r, c;
    cplx v;
};

std::vector<Entry> entries_of(const MatC* m, int dim) {
    std::vector<Entry> e;
    if (!m) {
        for (int i = 0; i < dim; ++i) e.push_back({i, i, 1.0});
        return e;
    }
    for (int j = 0; j < m->cols(); ++j)
        for (int i = 0; i < m->rows(); ++i)
            if ((*m)(i, j) != cplx(0.0)) e.push_back({i, j, (*m)(i, j)});
    return e;
}

SpMat from_triplets(int dim, const std::vector<Eigen::Triplet<cplx>>& t) {
    SpMat m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

std::array<int, kSlots> dims_of(const TableSet& t) {
    std::array<int, kSlots> d{};
    for (int s = 0; s < kSlots; ++s) {
        if (!t[s]) throw std::invalid_argument(std::string("missing operator table for slot ") + slot_name(s));
        d[s] = t[s]->size();
    }
    return d;
}

// T and T^dag with weight 1/2 each.
void add_hermitized(std::vector<Eigen::Triplet<cplx>>& out, const std::array<int, kSlots>& dims,
                    const SlotFactors& f, cplx coeff) {
    add_kron(out, dims, f, 0.5 * coeff);
    std::array<MatC, kSlots> adj;
    SlotFactors fa{};
    for (int s = 0; s < kSlots; ++s) {
        if (f[s]) {
            adj[s] = f[s]->adjoint();
            fa[s] = &adj[s];
        }
    }
    add_kron(out, dims, fa, 0.5 * std::conj(coeff));
}

enum class Field { L, R };

const Vec3Op& field(const TableSet& t, int slot, Field f) { return f == Field::L ? t[slot]->EL : t[slot]->ER; }

}  // namespace

const char* slot_name(int s) {
    static const char* names[kSlots] = {"W_A", "W_B", "W_C", "L_x", "L_y"};
    if (s < 0 || s >= kSlots) throw std::out_of_range("slot index");
    return names[s];
}

int CouplingConfig::dimension() const {
    int d = 1;
    for (int n : trunc) d *= n;
    return d;
}

void CouplingConfig::validate() const {
    if (!(beta > 0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
    for (int n : trunc)
        if (n < 1) throw std::invalid_argument("truncations must be >= 1");
}

std::array<Coupling, kSlots> initial_ansatz(double beta) {
    const double g = std::sqrt(1.0 / (2.0 * beta));
    return {Coupling::finite(g), Coupling::finite(std::sqrt(1.5) * g), Coupling::finite(g), Coupling::electric(),
            Coupling::electric()};
}

TableSet tables_for(const CouplingConfig& config, TableCache& cache) {
    TableSet t;
    for (int s = 0; s < kSlots; ++s) t[s] = cache.get(config.locals[s], config.trunc[s]);
    return t;
}

void add_kron(std::vector<Eigen::Triplet<cplx>>& out, const std::array<int, kSlots>& dims, const SlotFactors& f,
              cplx coeff) {
    std::array<int, kSlots> stride{};
    stride[kSlots - 1] = 1;
    for (int s = kSlots - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];
    std::vector<Entry> acc{{0, 0, coeff}};
    for (int s = 0; s < kSlots; ++s) {
        auto e = entries_of(f[s], dims[s]);
        std::vector<Entry> next;
        next.reserve(acc.size() * e.size());
        for (const auto& a : acc)
            for (const auto& b : e) next.push_back({a.r + b.r * stride[s], a.c + b.c * stride[s], a.v * b.v});
        acc.swap(next);
    }
    out.reserve(out.size() + acc.size());
    for (const auto& a : acc) out.emplace_back(a.r, a.c, a.v);
}

SpMat kron_operator(const std::array<int, kSlots>& dims, const SlotFactors& f, cplx coeff) {
    int dim = 1;
    for (int d : dims) dim *= d;
    std::vector<Eigen::Triplet<cplx>> t;
    add_kron(t, dims, f, coeff);
    return from_triplets(dim, t);
}

SpMat assemble_magnetic(const CouplingConfig& config, const TableSet& t, std::vector<LedgerTerm>* ledger) {
    config.validate();
    const auto dims = dims_of(t);
    const int dim = config.dimension();
    const double pre = 1.0 / (2.0 * config.g2());  // 1/(2 g^2)
    std::vector<Eigen::Triplet<cplx>> trip;

    // Tr 4 + h.c. = 16
    add_kron(trip, dims, SlotFactors{}, pre * 16.0);
    if (ledger) ledger->push_back({"constant", "magnetic", 8.0, "1/g^2", {}, false});
    // -(Tr W_n + h.c.) = -4 S_n
    for (int s : {kWA, kWB, kWC}) {
        SlotFactors f{};
        f[s] = &t[s]->S;
        add_kron(trip, dims, f, -4.0 * pre);
        if (ledger) ledger->push_back({std::string("plaquette ") + slot_name(s), "magnetic", -2.0, "1/g^2", {s}, false});
    }
    // -(Tr W_A W_B W_C + h.c.)
    std::vector<Eigen::Triplet<cplx>> prod;
    {
        SlotFactors f{};
        f[kWA] = &t[kWA]->S;
        f[kWB] = &t[kWB]->S;
        f[kWC] = &t[kWC]->S;
        add_kron(prod, dims, f, 2.0);
    }
    const std::array<std::array<int, 3>, 3> scalar_vector = {{{kWA, kWB, kWC}, {kWB, kWA, kWC}, {kWC, kWA, kWB}}};
    for (const auto& sv : scalar_vector)
        for (int a = 0; a < 3; ++a) {
            SlotFactors f{};
            f[sv[0]] = &t[sv[0]]->S;
            f[sv[1]] = &t[sv[1]]->W[a];
            f[sv[2]] = &t[sv[2]]->W[a];
            add_kron(prod, dims, f, 0.5);
        }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const int e = levi_civita(a, b, c);
                if (!e) continue;
                SlotFactors f{};
                f[kWA] = &t[kWA]->W[a];
                f[kWB] = &t[kWB]->W[b];
                f[kWC] = &t[kWC]->W[c];
                add_kron(prod, dims, f, 0.25 * kI * static_cast<double>(e));
            }
    SpMat m = from_triplets(dim, prod);
    SpMat mh = SpMat(m.adjoint());
    if (ledger) ledger->push_back({"product W_A W_B W_C", "magnetic", -0.5, "1/g^2", {kWA, kWB, kWC}, true});
    SpMat hb = from_triplets(dim, trip);
    hb -= pre * (m + mh);
    hb.makeCompressed();
    return hb;
}

SpMat assemble_electric_local(const CouplingConfig& config, const TableSet& t, std::vector<LedgerTerm>* ledger) {
    config.validate();
    const auto dims = dims_of(t);
    const double g2 = config.g2();
    static const std::array<double, kSlots> coeff = {2.0, 3.0, 2.0, 1.0, 1.0};
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int s = 0; s < kSlots; ++s) {
        SlotFactors f{};
        f[s] = &t[s]->casimir;
        add_kron(trip, dims, f, g2 * coeff[s]);
        if (ledger) ledger->push_back({std::string("casimir ") + slot_name(s), "electric-local", coeff[s], "g^2", {s}, false});
    }
    return from_triplets(config.dimension(), trip);
}

SpMat assemble_electric_nonlocal(const CouplingConfig& config, const TableSet& t, std::vector<LedgerTerm>* ledger) {
    config.validate();
    const auto dims = dims_of(t);
    const double g2 = config.g2();
    std::vector<Eigen::Triplet<cplx>> trip;

    struct Bilinear {
        const char* name;
        double coeff;
        int s1;
        Field f1;
        int s2;
        Field f2;
    };
    // E(s1) . E(s2)
    static const Bilinear dots[] = {
        {"EL(L_x).EL(C)", 1.0, kLx, Field::L, kWC, Field::L},
        {"EL(L_y).EL(A)", 1.0, kLy, Field::L, kWA, Field::L},
        {"ER(L_x).ER(A)", 1.0, kLx, Field::R, kWA, Field::R},
        {"ER(C).EL(B)", 2.0, kWC, Field::R, kWB, Field::L},
        {"ER(C).EL(A)", 1.0, kWC, Field::R, kWA, Field::L},
        {"ER(C).ER(B)", 1.0, kWC, Field::R, kWB, Field::R},
        {"ER(C).EL(L_y)", 1.0, kWC, Field::R, kLy, Field::L},
        {"EL(A).EL(B)", 1.0, kWA, Field::L, kWB, Field::L},
        {"EL(A).ER(B)", 1.0, kWA, Field::L, kWB, Field::R},
        {"EL(B).EL(L_y)", 1.0, kWB, Field::L, kLy, Field::L},
        {"ER(B).EL(L_y)", 2.0, kWB, Field::R, kLy, Field::L},
    };
    for (const auto& d : dots) {
        for (int a = 0; a < 3; ++a) {
            SlotFactors f{};
            f[d.s1] = &field(t, d.s1, d.f1)[a];
            f[d.s2] = &field(t, d.s2, d.f2)[a];
            add_hermitized(trip, dims, f, g2 * d.coeff);
        }
        if (ledger) ledger->push_back({d.name, "electric-nonlocal", d.coeff, "g^2", {d.s1, d.s2}, true});
    }

    // E(s1)^a R^{ab}(P) E(s2)^b, with R transposed when `transpose`
    struct Transported {
        const char* name;
        int s1;
        Field f1;
        int sp;
        bool transpose;
        int s2;
        Field f2;
    };
    static const Transported tr[] = {
        {"EL(C) R(L_x) ER(A)", kWC, Field::L, kLx, false, kWA, Field::R},
        {"EL(C) R^T(L_y) ER(B)", kWC, Field::L, kLy, true, kWB, Field::R},
        {"EL(L_x) R^T(L_y) ER(B)", kLx, Field::L, kLy, true, kWB, Field::R},
    };
    for (const auto& d : tr) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                SlotFactors f{};
                f[d.s1] = &field(t, d.s1, d.f1)[a];
                f[d.sp] = d.transpose ? &t[d.sp]->R[b][a] : &t[d.sp]->R[a][b];
                f[d.s2] = &field(t, d.s2, d.f2)[b];
                add_hermitized(trip, dims, f, g2);
            }
        if (ledger) ledger->push_back({d.name, "electric-nonlocal", 1.0, "g^2", {d.s1, d.sp, d.s2}, true});
    }

    // E_L(B).E_R(B) on a single slot
    {
        SlotFactors f{};
        f[kWB] = &t[kWB]->el_er;
        add_hermitized(trip, dims, f, g2);
        if (ledger) ledger->push_back({"EL(B).ER(B)", "electric-nonlocal", 1.0, "g^2", {kWB}, true});
    }
    return from_triplets(config.dimension(), trip);
}

DualHamiltonian assemble_full(const CouplingConfig& config, const TableSet& t) {
    config.validate();
    DualHamiltonian h;
    h.config = config;
    h.dims = dims_of(t);
    for (int s = 0; s < kSlots; ++s)
        if (h.dims[s] != config.trunc[s]) throw std::invalid_argument("table size does not match truncation");
    h.dim = config.dimension();
    h.HB = assemble_magnetic(config, t, &h.ledger);
    h.HEloc = assemble_electric_local(config, t, &h.ledger);
    h.HEnl = assemble_electric_nonlocal(config, t, &h.ledger);
    h.H = h.HB + h.HEloc + h.HEnl;
    h.H.makeCompressed();
    return h;
}

DualHamiltonian assemble_full(const CouplingConfig& config, TableCache& cache) {
    return assemble_full(config, tables_for(config, cache));
}

DualHamiltonian assemble_electric_baseline(double beta, const std::array<int, kSlots>& trunc, TableCache& cache) {
    CouplingConfig c;
    c.beta = beta;
    c.trunc = trunc;
    for (auto& l : c.locals) l = Coupling::electric();
    return assemble_full(c, cache);
}

std::array<SpMat, 3> large_loop_field(const CouplingConfig& config, const TableSet& t, int slot) {
    if (slot != kLx && slot != kLy) throw std::invalid_argument("large_loop_field needs slot L_x or L_y");
    const auto dims = dims_of(t);
    (void)config;
    std::array<SpMat, 3> out;
    for (int a = 0; a < 3; ++a) {
        SlotFactors f{};
        f[slot] = &t[slot]->EL[a];
        out[a] = kron_operator(dims, f);
    }
    return out;
}

nlohmann::json ledger_json(const DualHamiltonian& h) {
    nlohmann::json j;
    j["beta"] = h.config.beta;
    j["g2"] = h.config.g2();
    j["dimension"] = h.dim;
    j["truncations"] = h.config.trunc;
    std::vector<std::string> locals;
    for (const auto& c : h.config.locals) locals.push_back(c.key());
    j["local_couplings"] = locals;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : h.ledger) {
        std::vector<std::string> slots;
        for (int s : t.slots) slots.push_back(slot_name(s));
        const double scale = t.scaling == "g^2" ? h.config.g2() : 1.0 / h.config.g2();
        j["terms"].push_back({{"name", t.name},
                              {"part", t.part},
                              {"coefficient", t.coefficient},
                              {"scaling", t.scaling},
                              {"value", t.coefficient * scale},
                              {"slots", slots},
                              {"hermitized", t.hermitized}});
    }
    return j;
}

double max_abs(const SpMat& m) {
    double mx = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
}

double hermiticity_defect(const SpMat& m) {
    SpMat d = m - SpMat(m.adjoint());
    return max_abs(d);
}

}  // namespace su2dual
