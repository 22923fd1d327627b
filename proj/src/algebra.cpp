#include "algebra.hpp"

#include "koszul.hpp"

namespace cohoch {

Sweedler sweedler_of(const ChainMap& into_tensor, TermRef t) {
    Sweedler out;
    for (const auto& [p, k] : into_tensor.apply(t).c) out.emplace_back(p->left, p->right, k);
    return out;
}

Sweedler ChainCoalgebra::sweedler_reduced(TermRef t) const {
    Sweedler out;
    for (const auto& [a, b, k] : sweedler(t))
        if (a->degree > 0 && b->degree > 0) out.emplace_back(a, b, k);
    return out;
}

/* ------------------------------- verification ------------------------------- */

namespace {

/* augmentation counit applied on the left/right factor of a tensor term */
FormalSum counit_left(const Sweedler& sw) {
    FormalSum s;
    for (const auto& [a, b, k] : sw)
        if (a->degree == 0) s.add(b, k);
    return s;
}
FormalSum counit_right(const Sweedler& sw) {
    FormalSum s;
    for (const auto& [a, b, k] : sw)
        if (b->degree == 0) s.add(a, k);
    return s;
}

void check_counit(const ChainMap& coaction, const char* err_kind, bool left_factor, int up_to) {
    const FreeChainComplex& n = *coaction.src;
    int hi = std::min(coaction.hi, up_to);
    for (int d = 0; d <= hi; ++d)
        for (TermRef t : n.basis[d]) {
            Sweedler sw = sweedler_of(coaction, t);
            FormalSum got = left_factor ? counit_left(sw) : counit_right(sw);
            if (!(got - FormalSum(t)).zero())
                fail(err_kind, "counit law fails at " + to_string(t) + ": got " + to_string(got));
        }
}

}  // namespace

void verify_coalgebra(const ChainCoalgebra& a, int up_to) {
    if (auto w = chain_map_defect(a.delta, up_to))
        fail("NotACoalgebra", "diagonal is not a chain map at " + to_string(w->basis_elt) +
                                  " (degree " + std::to_string(w->degree) + "), defect " +
                                  to_string(w->defect));
    check_counit(a.delta, "NotACoalgebra", true, up_to);
    check_counit(a.delta, "NotACoalgebra", false, up_to);

    ComplexPtr t3l = tensor_complex(a.cc, a.c);
    ComplexPtr t3r = tensor_complex(a.c, a.cc);
    ChainMap lhs = compose(associator(t3l, t3r),
                           compose(tensor_map(a.delta, identity_map(a.c), a.cc, t3l), a.delta));
    ChainMap rhs = compose(tensor_map(identity_map(a.c), a.delta, a.cc, t3r), a.delta);
    if (auto w = map_difference_witness(lhs, rhs, up_to))
        fail("NotACoalgebra", "coassociativity fails at " + to_string(w->basis_elt) + ", defect " +
                                  to_string(w->defect));
}

void verify_bicomodule(const Bicomodule& b, int up_to) {
    const CoalgebraPtr& a = b.over;
    if (auto w = chain_map_defect(b.left, up_to))
        fail("NotABicomodule", "left coaction is not a chain map at " + to_string(w->basis_elt));
    if (auto w = chain_map_defect(b.right, up_to))
        fail("NotABicomodule", "right coaction is not a chain map at " + to_string(w->basis_elt));
    check_counit(b.left, "NotABicomodule", true, up_to);
    check_counit(b.right, "NotABicomodule", false, up_to);

    // left coassociativity: (delta (x) 1) lambda = (1 (x) lambda) lambda
    {
        ComplexPtr ccn_l = tensor_complex(a->cc, b.n);
        ComplexPtr ccn_r = tensor_complex(a->c, b.cn);
        ChainMap lhs = compose(associator(ccn_l, ccn_r),
                               compose(tensor_map(a->delta, identity_map(b.n), b.cn, ccn_l), b.left));
        ChainMap rhs = compose(tensor_map(identity_map(a->c), b.left, b.cn, ccn_r), b.left);
        if (auto w = map_difference_witness(lhs, rhs, up_to))
            fail("NotABicomodule", "left coassociativity fails at " + to_string(w->basis_elt) +
                                       ", defect " + to_string(w->defect));
    }
    // right coassociativity: (rho (x) 1) rho = (1 (x) delta) rho
    {
        ComplexPtr ncc_l = tensor_complex(b.nc, a->c);
        ComplexPtr ncc_r = tensor_complex(b.n, a->cc);
        ChainMap lhs = compose(associator(ncc_l, ncc_r),
                               compose(tensor_map(b.right, identity_map(a->c), b.nc, ncc_l), b.right));
        ChainMap rhs = compose(tensor_map(identity_map(b.n), a->delta, b.nc, ncc_r), b.right);
        if (auto w = map_difference_witness(lhs, rhs, up_to))
            fail("NotABicomodule", "right coassociativity fails at " + to_string(w->basis_elt) +
                                       ", defect " + to_string(w->defect));
    }
    // the coactions commute: (1 (x) rho) lambda = assoc (lambda (x) 1) rho
    {
        ComplexPtr cnc_l = tensor_complex(b.cn, a->c);
        ComplexPtr cnc_r = tensor_complex(a->c, b.nc);
        ChainMap lhs = compose(tensor_map(identity_map(a->c), b.right, b.cn, cnc_r), b.left);
        ChainMap rhs = compose(associator(cnc_l, cnc_r),
                               compose(tensor_map(b.left, identity_map(a->c), b.nc, cnc_l), b.right));
        if (auto w = map_difference_witness(lhs, rhs, up_to))
            fail("NotABicomodule", "coactions do not commute at " + to_string(w->basis_elt) +
                                       ", defect " + to_string(w->defect));
    }
    // coaugmentation compatibility (needed for the cobar inclusion)
    if (b.unit && a->unit) {
        FormalSum lw = b.left.apply(b.unit) - FormalSum(pair_term(a->unit, b.unit));
        FormalSum rw = b.right.apply(b.unit) - FormalSum(pair_term(b.unit, a->unit));
        if (!lw.zero() || !rw.zero())
            fail("NotABicomodule", "coactions are not coaugmented at " + to_string(b.unit));
    }
}

/* ------------------------------- constructions ------------------------------- */

CoalgebraPtr tensor_coalgebra(CoalgebraPtr a, CoalgebraPtr b, int trunc, ComplexPtr on) {
    auto r = std::make_shared<ChainCoalgebra>();
    r->c = on ? on : tensor_complex(a->c, b->c, trunc);
    r->cc = tensor_complex(r->c, r->c);
    auto rule = [&](TermRef t) {
        TermRef x = t->left, y = t->right;
        FormalSum s;
        for (const auto& [x1, x2, kx] : a->sweedler(x))
            for (const auto& [y1, y2, ky] : b->sweedler(y)) {
                int sg = pass_sign(x2->degree, y1->degree);
                s.add(pair_term(pair_term(x1, y1), pair_term(x2, y2)), sg * kx * ky);
            }
        return s;
    };
    r->delta = make_chain_map(r->c, r->cc, 0, rule);
    r->unit = (a->unit && b->unit) ? pair_term(a->unit, b->unit) : nullptr;
    return r;
}

BicomodulePtr self_bicomodule(CoalgebraPtr a) {
    auto r = std::make_shared<Bicomodule>();
    r->n = a->c;
    r->over = a;
    r->cn = a->cc;
    r->nc = a->cc;
    r->left = a->delta;
    r->right = a->delta;
    r->unit = a->unit;
    return r;
}

BicomodulePtr make_bicomodule(ComplexPtr n, CoalgebraPtr over,
                              const std::function<FormalSum(TermRef)>& left_rule,
                              const std::function<FormalSum(TermRef)>& right_rule, TermRef unit,
                              bool verify) {
    auto r = std::make_shared<Bicomodule>();
    r->n = n;
    r->over = over;
    r->cn = tensor_complex(over->c, n);
    r->nc = tensor_complex(n, over->c);
    r->left = make_chain_map(n, r->cn, 0, left_rule);
    r->right = make_chain_map(n, r->nc, 0, right_rule);
    r->unit = unit;
    if (verify) verify_bicomodule(*r);
    return r;
}

BicomodulePtr tensor_bicomodule(BicomodulePtr x, BicomodulePtr y, CoalgebraPtr over_tensor) {
    ComplexPtr n = tensor_complex(x->n, y->n);
    auto left_rule = [&](TermRef t) {
        TermRef u = t->left, v = t->right;
        FormalSum s;
        for (const auto& [ca, u2, k1] : x->sweedler_left(u))
            for (const auto& [cb, v2, k2] : y->sweedler_left(v)) {
                int sg = pass_sign(u2->degree, cb->degree);
                s.add(pair_term(pair_term(ca, cb), pair_term(u2, v2)), sg * k1 * k2);
            }
        return s;
    };
    auto right_rule = [&](TermRef t) {
        TermRef u = t->left, v = t->right;
        FormalSum s;
        for (const auto& [u2, ca, k1] : x->sweedler_right(u))
            for (const auto& [v2, cb, k2] : y->sweedler_right(v)) {
                int sg = pass_sign(ca->degree, v2->degree);
                s.add(pair_term(pair_term(u2, v2), pair_term(ca, cb)), sg * k1 * k2);
            }
        return s;
    };
    TermRef unit = (x->unit && y->unit) ? pair_term(x->unit, y->unit) : nullptr;
    return make_bicomodule(n, over_tensor, left_rule, right_rule, unit, false);
}

}  // namespace cohoch
