#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sdr.hpp"

#include <set>

using namespace cohoch;

namespace {

std::string thrown_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind;
    }
    return "";
}

/* betti numbers and torsion through degree up_to, as comparable data */
std::vector<std::pair<int, std::vector<Int>>> h_table(const FreeChainComplex& c, int up_to) {
    std::vector<std::pair<int, std::vector<Int>>> r;
    for (int n = 0; n <= up_to; ++n) {
        auto g = homology_group(c, n);
        r.emplace_back(g.betti, g.torsion);
    }
    return r;
}

TermRef prod_atom(const ProductStructure& ps, const Simp& cell) {
    REQUIRE(!cell.degenerate());
    return atom(ps.prod.names[cell.base_dim][cell.base_idx], cell.base_dim);
}

SimplicialGroup cyclic_group(int k, int level_cap) {
    std::vector<std::string> elems;
    std::vector<std::vector<int>> table(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i) {
        elems.push_back(i == 0 ? "e" : "g" + std::to_string(i));
        for (int j = 0; j < k; ++j) table[i][j] = (i + j) % k;
    }
    return constant_group("Z" + std::to_string(k), elems, table, 0, level_cap);
}

struct CoverSetup {
    EMSDR em;
    CoalgebraPtr twisted;
    Perturbation theta;
};

/* S^1 x_tau Z/k with tau(1-cell) = g^t, against the plain product SDR */
CoverSetup circle_cover(int k, int t, int trunc) {
    SSet s1 = sphere(1);
    SimplicialGroup g = cyclic_group(k, trunc + 2);
    TwistingFunction tau;
    tau.tau = {{}, {t % k}};
    SSet tw = twisted_cartesian_product(s1, g, tau, g.s, left_translation(g), trunc);
    CoverSetup cs{em_sdr(s1, g.s, trunc), normalized_chains(tw, trunc), {}};
    cs.theta = differential_difference(cs.twisted->c, cs.em.sdr.y);
    return cs;
}

}  // namespace

TEST_CASE("Eilenberg-MacLane SDR: all five conditions on sphere products") {
    for (auto [kn, ln] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
        EMSDR e = em_sdr(sphere(kn), sphere(ln), 6);
        SDRReport rep = verify_sdr(e.sdr);
        for (const auto& line : rep.lines) {
            INFO("S^", kn, " x S^", ln, ": ", line.condition, " witness ", line.witness);
            CHECK(line.ok);
        }
        CHECK(rep.lines.size() == 5);
        CHECK(rep.ok);
    }
}

TEST_CASE("EM SDR on a non-reduced pair: standard simplices") {
    EMSDR e = em_sdr(standard_simplex(2), sphere(1), 5);
    CHECK(verify_sdr(e.sdr).ok);
    EMSDR e2 = em_sdr(sphere(1), standard_simplex(3), 5);
    CHECK(verify_sdr(e2.sdr).ok);
}

TEST_CASE("shuffle map on two 1-simplices: the two shuffles with signs") {
    SSet s1 = sphere(1);
    EMSDR e = em_sdr(s1, s1, 4);
    TermRef c = atom("c1", 1);
    Simp sig{{}, 1, 0};
    FormalSum want;
    want.add(prod_atom(e.ps, e.ps.normalize_pair(SSet::degeneracy_of(sig, 1),
                                                 SSet::degeneracy_of(sig, 0))),
             1);
    want.add(prod_atom(e.ps, e.ps.normalize_pair(SSet::degeneracy_of(sig, 0),
                                                 SSet::degeneracy_of(sig, 1))),
             -1);
    CHECK((e.sdr.nabla.apply(pair_term(c, c)) - want).zero());
}

TEST_CASE("f nabla = Id on the torus chains through degree 4") {
    EMSDR e = em_sdr(sphere(1), sphere(1), 4);
    auto w = map_difference_witness(compose(e.sdr.f, e.sdr.nabla), identity_map(e.sdr.x), 4);
    CHECK(!w);
}

TEST_CASE("EM homotopy vanishes on level 0") {
    EMSDR e = em_sdr(sphere(1), sphere(2), 4);
    CHECK(e.sdr.h.at(0).is_zero());
}

TEST_CASE("the SDR identifies homology of the product with the tensor model") {
    EMSDR e = em_sdr(sphere(1), sphere(1), 5);
    CHECK(h_table(*e.sdr.x, 4) == h_table(*e.sdr.y, 4));  // torus: 1, 2, 1
    CHECK(homology_group(*e.sdr.y, 1).betti == 2);
    EMSDR e2 = em_sdr(sphere(2), sphere(2), 5);
    CHECK(h_table(*e2.sdr.x, 4) == h_table(*e2.sdr.y, 4));
    CHECK(homology_group(*e2.sdr.y, 2).betti == 2);
    CHECK(homology_group(*e2.sdr.y, 4).betti == 1);
}

TEST_CASE("identity SDR verifies") {
    auto c = normalized_chains(sphere(2), 6)->c;
    CHECK(verify_sdr(identity_sdr(c)).ok);
}

TEST_CASE("corrupted homotopy: flipped sign is caught with a witness") {
    EMSDR e = em_sdr(sphere(1), sphere(1), 4);
    SDRData bad = e.sdr;
    bool flipped = false;
    for (int n = 1; n <= bad.h.hi && !flipped; ++n) {
        IntMat m = bad.h.at(n);
        for (int j = 0; j < m.cols && !flipped; ++j)
            for (int i = 0; i < m.rows && !flipped; ++i)
                if (m(i, j) != 0) {
                    m(i, j) = -m(i, j);
                    bad.h.m[n] = m;
                    flipped = true;
                }
    }
    REQUIRE(flipped);
    SDRReport rep = verify_sdr(bad);
    CHECK(!rep.ok);
    const auto& htpy = rep.lines[1];
    CHECK(htpy.condition == "d h + h d = nabla f - Id");
    CHECK(!htpy.ok);
    CHECK(htpy.degree >= 0);
    CHECK(!htpy.witness.empty());
}

TEST_CASE("EM SDR naturality in both factors") {
    SSet s1 = sphere(1);
    SSet pt = standard_simplex(0);
    EMSDR big = em_sdr(s1, s1, 4);

    auto check_square = [&](const SSet& k2, const SSet& l2, const SMap& a, const SMap& b) {
        EMSDR small = em_sdr(k2, l2, 4);
        SMap ab = product_smap(big.ps, k2, l2, small.ps, a, b);
        validate_smap(big.ps.prod, small.ps.prod, ab);
        ChainMap top = chains_of_smap(big.ps.prod, small.ps.prod, ab, big.cy, small.cy);
        ChainMap ca = chains_of_smap(s1, k2, a, big.ck, small.ck);
        ChainMap cb = chains_of_smap(s1, l2, b, big.cl, small.cl);
        ChainMap bottom = tensor_map(ca, cb, big.sdr.x, small.sdr.x);
        auto w = map_difference_witness(compose(bottom, big.sdr.f), compose(small.sdr.f, top));
        INFO((w ? to_string(w->basis_elt) : std::string()));
        CHECK(!w);
    };
    check_square(s1, pt, identity_smap(s1), constant_smap(s1, pt));
    check_square(pt, s1, constant_smap(s1, pt), identity_smap(s1));
    check_square(s1, s1, constant_smap(s1, s1), identity_smap(s1));
}

TEST_CASE("basic perturbation with zero perturbation is the identity") {
    EMSDR e = em_sdr(sphere(1), sphere(1), 4);
    Perturbation zero{zero_map(e.sdr.y, e.sdr.y, -1)};
    SDRData out = basic_perturbation(e.sdr, zero);
    CHECK(out.x == e.sdr.x);
    CHECK(out.y == e.sdr.y);
    for (int n = 0; n <= out.nabla.hi; ++n) CHECK(out.nabla.at(n) == e.sdr.nabla.at(n));
    for (int n = 0; n <= out.h.hi; ++n) CHECK(out.h.at(n) == e.sdr.h.at(n));
}

TEST_CASE("double cover of the circle through the perturbation lemma") {
    CoverSetup cs = circle_cover(2, 1, 5);

    // unperturbed small model: two disjoint circles
    CHECK(homology_group(*cs.em.sdr.x, 0).betti == 2);
    CHECK(homology_group(*cs.em.sdr.x, 1).betti == 2);

    SDRData p = basic_perturbation(cs.em.sdr, cs.theta);
    CHECK(verify_sdr(p).ok);

    // perturbed small model: the total space is again a circle
    auto small = h_table(*p.x, 3);
    CHECK(small[0] == std::pair<int, std::vector<Int>>{1, {}});
    CHECK(small[1] == std::pair<int, std::vector<Int>>{1, {}});
    CHECK(small[2].first == 0);
    CHECK(small == h_table(*cs.twisted->c, 3));

    // the perturbed Y is the twisted complex itself
    for (int n = 1; n <= 5; ++n) {
        for (int j = 0; j < p.y->dim(n); ++j)
            CHECK((p.y->boundary(p.y->basis[n][j]) -
                   cs.twisted->c->boundary(cs.twisted->c->basis[n][j]))
                      .zero());
    }
}

TEST_CASE("perturbation series terminates within the filtration bound") {
    CoverSetup cs = circle_cover(3, 1, 5);
    int maxw = max_filtration_weight(cs.em.sdr);
    CHECK(maxw == 1);  // K = S^1: weights are 0 and 1
    // (h theta)^2 = 0 follows: check directly
    const ChainMap& h = cs.em.sdr.h;
    const ChainMap& th = cs.theta.theta;
    for (int n = 2; n <= 4; ++n) {
        IntMat ht = h.at(n - 1) * th.at(n);
        CHECK((ht * ht).is_zero());
    }
}

TEST_CASE("perturbed SDRs for the cyclic covers match direct homology") {
    for (auto [k, t] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 3}}) {
        CoverSetup cs = circle_cover(k, t, 4);
        SDRData p = basic_perturbation(cs.em.sdr, cs.theta);
        CHECK(verify_sdr(p).ok);
        auto small = h_table(*p.x, 3);
        CHECK(small == h_table(*cs.twisted->c, 3));
        // gcd(t, k) = 1 here: connected cover, again a circle
        CHECK(small[0] == std::pair<int, std::vector<Int>>{1, {}});
        CHECK(small[1] == std::pair<int, std::vector<Int>>{1, {}});
    }
    // non-generator twist: two disjoint double covers
    CoverSetup cs = circle_cover(4, 2, 4);
    SDRData p = basic_perturbation(cs.em.sdr, cs.theta);
    CHECK(verify_sdr(p).ok);
    auto small = h_table(*p.x, 3);
    CHECK(small == h_table(*cs.twisted->c, 3));
    CHECK(small[0].first == 2);
    CHECK(small[1].first == 2);
}

TEST_CASE("perturbation preconditions: lowering and square-zero") {
    EMSDR e = em_sdr(sphere(1), sphere(1), 4);
    // d itself does not lower the K-weight (faces in the second factor keep it)
    ChainMap d = differential_map(e.sdr.y);
    CHECK(thrown_kind([&] { basic_perturbation(e.sdr, Perturbation{d}); }) ==
          "PerturbationNotLowering");

    // a single weight-lowering entry on the torus product breaks (d + theta)^2 = 0
    ComplexPtr y = e.sdr.y;
    const auto& filt = e.sdr.filt;
    auto square_at = [&](const ChainMap& th, int n) {
        if (n < 2 || n > y->trunc) return IntMat(0, 0);
        IntMat a = y->d[n - 1] + th.at(n - 1);
        IntMat b = y->d[n] + th.at(n);
        return a * b;
    };
    ChainMap bad = zero_map(y, y, -1);
    bool broke = false;
    for (int n = 1; n <= bad.hi && !broke; ++n)
        for (int j = 0; j < y->dim(n) && !broke; ++j)
            for (int i = 0; i < y->dim(n - 1) && !broke; ++i) {
                if (filt[n - 1][i] >= filt[n][j]) continue;
                bad.m[n](i, j) += 1;
                if (!square_at(bad, n).is_zero() || !square_at(bad, n + 1).is_zero())
                    broke = true;
                else
                    bad.m[n](i, j) -= 1;
            }
    REQUIRE(broke);
    CHECK(thrown_kind([&] { basic_perturbation(e.sdr, Perturbation{bad}); }) == "SquareNotZero");
}
