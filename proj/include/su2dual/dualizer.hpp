// Symbolic path algebra for the loop dualization: free-group words over lattice
// links, formal electric-field expressions with parallel transports, the
// merging canonical transformation, Gauss-law reduction and torus counting.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace su2dual::symbolic {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Generator `gen` or its inverse.
struct Letter {
    int gen = 0;
    bool inv = false;
    auto operator<=>(const Letter&) const = default;
};
using Word = std::vector<Letter>;

Word reduce(Word w);  // free reduction
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);  // reduced
Word letter(int gen, bool inv = false);
// Replaces each generator by a word (empty words delete it) and reduces.
Word substitute(const Word& w, const std::vector<Word>& images);

// Periodic Nx x Ny lattice. Sites are x + Nx y, links 2 site + mu with mu = 0 (x), 1 (y).
struct Lattice {
    int nx = 2, ny = 2;

    Lattice(int nx_, int ny_);
    int num_sites() const { return nx * ny; }
    int num_links() const { return 2 * num_sites(); }
    int site(int x, int y) const;
    int link(int site, int mu) const { return 2 * site + mu; }
    int tail(int link) const { return link / 2; }
    int head(int link) const;
    std::string site_name(int s) const;
    std::string link_name(int l) const;
};

// A word over link generators. Throws GeometryError if consecutive letters do not connect.
int path_tail(const Lattice& lat, const Word& w);
int path_head(const Lattice& lat, const Word& w);
bool path_connected(const Lattice& lat, const Word& w);
bool path_closed(const Lattice& lat, const Word& w);
std::string word_string(const Word& w, const std::vector<std::string>& names);

// Formal sum of c * P E_L(atom) P^dag, with E_L(atom) the left field of a base
// link. Right fields are stored through E_R(l) = -l^dag E_L(l) l, so the
// representation is canonical once transports are reduced.
class ElectricExpr {
public:
    using Key = std::pair<int, Word>;  // (atom, transport)

    static ElectricExpr left(int atom);
    static ElectricExpr right(int atom);

    ElectricExpr& operator+=(const ElectricExpr& o);
    ElectricExpr& operator-=(const ElectricExpr& o);
    ElectricExpr operator+(const ElectricExpr& o) const;
    ElectricExpr operator-(const ElectricExpr& o) const;
    ElectricExpr operator-() const;
    ElectricExpr scaled(std::int64_t c) const;
    // Q X Q^dag
    ElectricExpr transported(const Word& q) const;
    // Right field of a variable with word w and left field *this: -w^dag X w.
    ElectricExpr right_of(const Word& w) const;

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::map<Key, std::int64_t>& terms() const { return terms_; }
    bool operator==(const ElectricExpr& o) const { return terms_ == o.terms_; }

    std::string str(const Lattice& lat) const;

private:
    std::map<Key, std::int64_t> terms_;
    void add(const Key& k, std::int64_t c);
};

// A dual variable: its word in base links and its conjugate left field in base fields.
struct Variable {
    std::string name;
    Word word;
    ElectricExpr left;
    ElectricExpr right() const { return left.right_of(word); }
};

struct CtResult {
    Variable composite;  // U(AC) = U(A) U(B), field E_L(A)
    Variable second;     // U(B), field E_L(B) + E_R(A)
};
// The elementary merging transformation. Throws GeometryError unless head(a) == tail(b).
CtResult apply_ct(const Lattice& lat, const Variable& a, const Variable& b);

struct CtStep {
    std::string op;  // "merge" or "invert"
    std::string a, b;
};

class DualState {
public:
    explicit DualState(Lattice lat);  // one variable per link

    const Lattice& lattice() const { return lat_; }
    const std::vector<Variable>& vars() const { return vars_; }
    const std::vector<CtStep>& script() const { return script_; }
    int ct_count() const;
    int index(const std::string& name) const;

    void invert(int v);
    void merge(int a, int b);
    void rename(int v, std::string name);

    // Sum of the variable fields attached to a site: left fields of those
    // starting there, right fields of those ending there.
    ElectricExpr site_charge(int site) const;

private:
    Lattice lat_;
    std::vector<Variable> vars_;
    std::vector<CtStep> script_;
};

// Gauss law of the base links at a site.
ElectricExpr ks_gauss(const Lattice& lat, int site);

struct ReductionResult {
    bool reduced = false;
    int steps = 0;
    bool capped = false;
    ElectricExpr residue;
    std::vector<std::string> trace;  // rule applied at each step
};

struct GaussRule {
    std::string name;
    ElectricExpr expr;  // expr = 0
};

// Greedy reduction: subtracts transported multiples of a rule whenever that
// shortens the expression. Terminates since the term count strictly drops.
ReductionResult reduce_with(const ElectricExpr& x, const std::vector<GaussRule>& rules, const Lattice& lat,
                            int step_cap = 100000);

struct IdentityCheck {
    std::string name;
    bool holds = false;
    std::string lhs, rhs, residue;
    int trace_length = 0;
};

struct GaussCheck {
    std::string site;
    std::string rules;  // which rule set was used
    bool expected = true;  // controls expect a non-empty residue
    bool reduced = false;
    int steps = 0;
    std::string residue;
    bool passed() const { return reduced == expected; }
};

struct MinimalTorusDual {
    DualState state{Lattice(2, 2)};
    std::vector<std::string> loops;    // W_A, W_B, W_C, L_x, L_y
    std::vector<std::string> strings;  // T(B), Ubar_x(C), Ubar_y(A)
    std::vector<IdentityCheck> link_relations;
    std::vector<IdentityCheck> field_definitions;
    IdentityCheck plaquette_d;           // W_D^dag = W_A W_B W_C
    IdentityCheck plaquette_d_trivial;   // same with L_x = L_y = 1
    bool strings_form_maximal_tree = false;
    bool all_links_recovered = false;

    Word to_base(const Word& dual_word) const;  // dual symbols -> base links
};

MinimalTorusDual dualize_minimal_torus();

struct GaussReport {
    std::vector<GaussCheck> checks;
    bool all_reduced = false;
};
// All four dual laws with the full rule set, then the controls: D without its
// own base law, and each site with its rule removed.
GaussReport verify_gauss_laws(const MinimalTorusDual& d);

struct DofCount {
    int nx = 0, ny = 0;
    int links = 0;
    int plaquettes = 0;
    int large_loops = 0;
    int loops = 0;
    int strings = 0;
    int ct_count = 0;
    int cycle_rank = 0;  // rank of the loop set in the cycle space
    bool maximal_tree = false;
    bool strings_end_at_reference = false;
    bool links_conserved = false;
    bool gauss_preserved = false;  // every site charge equals the base Gauss law
    bool ok() const;
};

// Runs the generic CT script on a lattice. Loops are named W(x,y), L_x, L_y and
// strings T(x,y); the returned state holds them in that order.
struct TorusDual {
    DualState state;
    std::vector<int> loops, strings;
    std::vector<int> tree_links;
    int reference = 0;
};
TorusDual dualize_torus(int nx, int ny);

// Builds the generic CT script (plaquettes except at (0, Ny-1), two winding
// loops, strings on a tree rooted at (0, Ny-1)) and checks the counts.
// Throws std::invalid_argument for nx or ny below 2.
DofCount torus_dof_count(int nx, int ny);

nlohmann::json to_json(const MinimalTorusDual& d);
nlohmann::json to_json(const GaussReport& r);
nlohmann::json to_json(const DofCount& c);

}  // namespace su2dual::symbolic
