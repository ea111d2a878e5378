#include <doctest.h>

#include <set>

#include "su2dual/dualizer.hpp"

using namespace su2dual::symbolic;

namespace {

// Net number of x and y steps of a word, in units of the lattice size.
std::pair<int, int> winding(const Lattice& lat, const Word& w) {
    int dx = 0, dy = 0;
    for (const auto& l : w) (l.gen % 2 == 0 ? dx : dy) += l.inv ? -1 : 1;
    return {dx / lat.nx, dy / lat.ny};
}

const Variable& var(const DualState& s, const std::string& n) { return s.vars()[s.index(n)]; }

}  // namespace

TEST_SUITE("dualizer") {

TEST_CASE("free group words") {
    const Word w = {Letter{0, false}, Letter{1, false}, Letter{1, true}, Letter{2, true}};
    CHECK(reduce(w) == Word{Letter{0, false}, Letter{2, true}});
    CHECK(inverse(reduce(w)) == Word{Letter{2, false}, Letter{0, true}});
    CHECK(concat(w, inverse(w)).empty());
    CHECK(concat(letter(3), letter(3, true)).empty());
    // generator 0 -> 1 2, generator 2 -> nothing
    const std::vector<Word> img = {concat(letter(1), letter(2)), letter(1), {}};
    CHECK(substitute(w, img) == Word{Letter{1, false}, Letter{2, false}});
}

TEST_CASE("lattice geometry and paths") {
    const Lattice lat(3, 2);
    CHECK(lat.num_links() == 12);
    CHECK(lat.head(lat.link(lat.site(2, 0), 0)) == lat.site(0, 0));
    CHECK(lat.head(lat.link(lat.site(1, 1), 1)) == lat.site(1, 0));
    const Word sq = {Letter{lat.link(0, 0), false}, Letter{lat.link(1, 1), false}, Letter{lat.link(3, 0), true},
                     Letter{lat.link(0, 1), true}};
    CHECK(path_connected(lat, sq));
    CHECK(path_closed(lat, sq));
    CHECK(winding(lat, sq) == std::pair{0, 0});
    const Word broken = {Letter{lat.link(0, 0), false}, Letter{lat.link(0, 1), false}};
    CHECK_FALSE(path_connected(lat, broken));
    CHECK_THROWS_AS(path_head(lat, broken), GeometryError);
    CHECK_THROWS_AS(Lattice(0, 3), std::invalid_argument);
}

TEST_CASE("electric expressions") {
    const auto l = ElectricExpr::left(3);
    CHECK((l - l).empty());
    CHECK(l.scaled(0).empty());
    CHECK(l.scaled(2) == l + l);
    CHECK(ElectricExpr::right(3) == l.right_of(letter(3)));
    // E_R(l) = -l^dag E_L(l) l
    CHECK(ElectricExpr::right(3) == -l.transported(letter(3, true)));
    CHECK(l.transported(letter(5)).transported(letter(5, true)) == l);
}

TEST_CASE("the merging transformation") {
    const Lattice lat(2, 2);
    DualState s(lat);
    const auto& a = s.vars()[lat.link(0, 0)];
    const auto& b = s.vars()[lat.link(1, 1)];
    const auto r = apply_ct(lat, a, b);
    CHECK(r.composite.word == concat(a.word, b.word));
    CHECK(r.composite.left == a.left);
    CHECK(r.second.word == b.word);
    CHECK(r.second.left == b.left + a.right());
    CHECK_THROWS_AS(apply_ct(lat, a, s.vars()[lat.link(0, 1)]), GeometryError);
}

TEST_CASE("minimal torus: loops, strings and their words") {
    const auto d = dualize_minimal_torus();
    const auto& st = d.state;
    const auto& lat = st.lattice();
    CHECK(st.vars().size() == 8);
    CHECK(st.ct_count() == 12);
    CHECK(d.loops.size() == 5);
    CHECK(d.strings.size() == 3);
    for (const auto& n : {"W_A", "W_B", "W_C"}) {
        const Word w = var(st, n).word;
        CHECK(path_closed(lat, w));
        CHECK(w.size() == 4);
        CHECK(winding(lat, w) == std::pair{0, 0});
    }
    const auto wx = winding(lat, var(st, "L_x").word);
    const auto wy = winding(lat, var(st, "L_y").word);
    CHECK(path_closed(lat, var(st, "L_x").word));
    CHECK(path_closed(lat, var(st, "L_y").word));
    CHECK(std::abs(wx.first) == 1);
    CHECK(wx.second == 0);
    CHECK(wy.first == 0);
    CHECK(std::abs(wy.second) == 1);
    std::set<int> ends;
    for (const auto& n : d.strings) {
        const Word w = var(st, n).word;
        CHECK(path_connected(lat, w));
        CHECK_FALSE(path_closed(lat, w));
        ends.insert(path_head(lat, w));
        ends.insert(path_tail(lat, w));
    }
    CHECK(ends.size() == 4);  // the strings reach every site
}

TEST_CASE("minimal torus: inverse link relations and field definitions") {
    const auto d = dualize_minimal_torus();
    CHECK(d.strings_form_maximal_tree);
    CHECK(d.all_links_recovered);
    CHECK(d.link_relations.size() >= 8);
    for (const auto& c : d.link_relations) CHECK_MESSAGE(c.holds, c.name);
    REQUIRE(!d.field_definitions.empty());
    for (const auto& c : d.field_definitions) CHECK_MESSAGE(c.holds, c.name);
}

TEST_CASE("dual Gauss laws and their controls") {
    const auto d = dualize_minimal_torus();
    const auto rep = verify_gauss_laws(d);
    CHECK(rep.all_reduced);
    int laws = 0, controls = 0;
    for (const auto& c : rep.checks) {
        CHECK_MESSAGE(c.passed(), c.site << " " << c.rules);
        (c.expected ? laws : controls) += 1;
    }
    CHECK(laws >= 4);
    CHECK(controls >= 1);
}

TEST_CASE("charges at every site are conserved by the transformations") {
    for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 4}}) {
        const auto t = dualize_torus(nx, ny);
        for (int s = 0; s < t.state.lattice().num_sites(); ++s)
            CHECK(t.state.site_charge(s) == ks_gauss(t.state.lattice(), s));
        CHECK(t.loops.size() + t.strings.size() == static_cast<std::size_t>(2 * nx * ny));
    }
}

TEST_CASE("degree-of-freedom counts on small tori") {
    for (int nx = 2; nx <= 6; ++nx)
        for (int ny = 2; ny <= 6; ++ny) {
            const auto c = torus_dof_count(nx, ny);
            CHECK(c.ok());
            CHECK(c.loops == nx * ny + 1);
            CHECK(c.strings == nx * ny - 1);
            CHECK(c.links == 2 * nx * ny);
            CHECK(c.cycle_rank == nx * ny + 1);
            CHECK(c.maximal_tree);
            CHECK(c.gauss_preserved);
            CHECK(c.links_conserved);
        }
    const auto a = torus_dof_count(2, 2);
    CHECK((a.loops == 5 && a.strings == 3));
    const auto b = torus_dof_count(2, 3);
    CHECK((b.loops == 7 && b.strings == 5));
    CHECK_THROWS_AS(torus_dof_count(1, 3), std::invalid_argument);
}

}  // TEST_SUITE
