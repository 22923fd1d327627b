#include "constructions.hpp"

#include "koszul.hpp"

#include <algorithm>
#include <map>

namespace cohoch {

namespace {

/* ------------------------- word alphabets ------------------------- */

/* Letters over the positive-degree basis of a complex: shift dir = -1 gives
 * cobar letters s^{-1}c (degree |c|-1), dir = +1 gives bar letters s a
 * (degree |a|+1).  Words of a given total degree are enumerated by first
 * letter (alphabet order: underlying degree ascending, then basis position)
 * and then recursively on the suffix, memoized on (degree, length budget);
 * the order is deterministic run to run. */
struct WordCtx {
    std::vector<TermRef> letters;
    std::map<std::pair<int, int>, std::vector<TermRef>> memo;

    WordCtx(const FreeChainComplex& c, int dir) {
        for (int d = 1; d <= c.trunc; ++d)
            for (TermRef t : c.basis[d]) letters.push_back(shift_term(t, dir));
    }

    /* budget: max remaining letters, -1 = unbounded.  Callers must ensure a
     * nonnegative budget whenever a degree-0 letter exists. */
    const std::vector<TermRef>& words(int n, int budget) {
        auto key = std::make_pair(n, budget);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<TermRef> out;
        if (n == 0) out.push_back(word_term({}));
        if (budget != 0) {
            for (TermRef l : letters) {
                if (l->degree > n) break;  // letters sorted by degree
                for (TermRef suf : words(n - l->degree, budget < 0 ? -1 : budget - 1)) {
                    std::vector<TermRef> ls;
                    ls.reserve(suf->letters.size() + 1);
                    ls.push_back(l);
                    ls.insert(ls.end(), suf->letters.begin(), suf->letters.end());
                    out.push_back(word_term(std::move(ls)));
                }
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    }
};

void require_connected(const FreeChainComplex& c, const char* what) {
    if (c.dim(0) != 1)
        fail("NotConnected", std::string(what) + " requires a connected input (one basis element in degree 0); " +
                                 c.name + " has " + std::to_string(c.dim(0)));
}

std::vector<TermRef> replace_letter(const std::vector<TermRef>& ls, size_t i, TermRef l) {
    std::vector<TermRef> out(ls);
    out[i] = l;
    return out;
}

std::vector<TermRef> splice_letters(const std::vector<TermRef>& ls, size_t i, size_t drop,
                                    std::initializer_list<TermRef> ins) {
    std::vector<TermRef> out;
    out.reserve(ls.size() - drop + ins.size());
    out.insert(out.end(), ls.begin(), ls.begin() + i);
    out.insert(out.end(), ins.begin(), ins.end());
    out.insert(out.end(), ls.begin() + i + drop, ls.end());
    return out;
}

/* Cobar differential of one word: the letterwise desuspended internal
 * differential -s^{-1} d plus the letterwise splitting term
 * sum (-1)^{|c_(1)|} s^{-1}c_(1) | s^{-1}c_(2) over the reduced diagonal, each
 * applied at slot i with the sign of a degree -1 operator passing the prefix.
 * Words longer than cap are dropped (quotient semantics). */
FormalSum cobar_diff(const ChainCoalgebra& C, int cap, TermRef w) {
    FormalSum out;
    const auto& ls = w->letters;
    long long pre = 0;
    for (size_t i = 0; i < ls.size(); ++i) {
        TermRef ci = ls[i]->child;
        int ps = pass_sign(-1, pre);
        for (const auto& [t, k] : C.c->boundary(ci).c) {
            if (t->degree == 0) continue;  // s^{-1} of a degree-0 class is 0
            out.add(word_term(replace_letter(ls, i, shift_term(t, -1))), -k * ps);
        }
        if (cap < 0 || static_cast<int>(ls.size()) + 1 <= cap) {
            for (const auto& [a, b, k] : C.sweedler_reduced(ci)) {
                out.add(word_term(splice_letters(ls, i, 1, {shift_term(a, -1), shift_term(b, -1)})),
                        k * ps * parity_sign(a->degree));
            }
        }
        pre += ls[i]->degree;
    }
    return out;
}

/* Bar differential of one word: letterwise suspended internal differential
 * -s d plus the merge of adjacent letters, m(s a | s b) = (-1)^{|a|+1} s(ab),
 * both applied with the prefix sign of a degree -1 operator. */
FormalSum bar_diff(const ChainAlgebra& A, int cap, TermRef w) {
    (void)cap;  // merging shortens words: a capped bar stays within its basis
    FormalSum out;
    const auto& ls = w->letters;
    long long pre = 0;
    for (size_t i = 0; i < ls.size(); ++i) {
        TermRef ai = ls[i]->child;
        int ps = pass_sign(-1, pre);
        for (const auto& [t, k] : A.c->boundary(ai).c)
            out.add(word_term(replace_letter(ls, i, shift_term(t, +1))), -k * ps);
        if (i + 1 < ls.size()) {
            int msgn = ps * parity_sign(ai->degree + 1);
            for (const auto& [t, k] : A.mul(ai, ls[i + 1]->child).c)
                out.add(word_term(splice_letters(ls, i, 2, {shift_term(t, +1)})), k * msgn);
        }
        pre += ls[i]->degree;
    }
    return out;
}

}  // namespace

/* ------------------------- cobar ------------------------- */

AlgebraPtr cobar(CoalgebraPtr c, int trunc, int word_cap) {
    const ChainCoalgebra& C = *c;
    require_connected(*C.c, "cobar");
    if (C.c->dim(1) > 0 && word_cap < 0)
        fail("InfiniteLevel", "cobar of " + C.c->name +
                                  ": degree-1 classes give degree-0 letters, so word spaces are "
                                  "infinite; pass a word-length cap");
    auto ctx = std::make_shared<WordCtx>(*C.c, -1);
    std::string name = "Omega(" + C.c->name + ")";
    if (word_cap >= 0) name += "[cap " + std::to_string(word_cap) + "]";
    ComplexBuilder bld(name, trunc);
    for (int n = 0; n <= trunc; ++n)
        for (TermRef w : ctx->words(n, word_cap)) bld.add(w);
    ComplexPtr cx = bld.finish([&](TermRef w) { return cobar_diff(C, word_cap, w); });

    auto alg = std::make_shared<ChainAlgebra>();
    alg->c = cx;
    alg->unit = word_term({});
    alg->mul = [cx, word_cap](TermRef u, TermRef v) -> FormalSum {
        std::vector<TermRef> ls(u->letters);
        ls.insert(ls.end(), v->letters.begin(), v->letters.end());
        if (word_cap >= 0 && static_cast<int>(ls.size()) > word_cap) return {};
        TermRef w = word_term(std::move(ls));
        if (!cx->has(w)) return {};  // beyond the truncation
        return FormalSum(w);
    };
    return alg;
}

/* ------------------------- bar ------------------------- */

CoalgebraPtr bar(AlgebraPtr a, int trunc, int word_cap) {
    const ChainAlgebra& A = *a;
    require_connected(*A.c, "bar");
    if (!A.unit || A.c->basis[0][0] != A.unit)
        fail("NotConnected", "bar of " + A.c->name + ": the degree-0 basis element must be the unit");
    auto ctx = std::make_shared<WordCtx>(*A.c, +1);
    std::string name = "Bar(" + A.c->name + ")";
    if (word_cap >= 0) name += "[cap " + std::to_string(word_cap) + "]";
    ComplexBuilder bld(name, trunc);
    for (int n = 0; n <= trunc; ++n)
        for (TermRef w : ctx->words(n, word_cap)) bld.add(w);
    ComplexPtr cx = bld.finish([&](TermRef w) { return bar_diff(A, word_cap, w); });

    auto co = std::make_shared<ChainCoalgebra>();
    co->c = cx;
    co->cc = tensor_complex(cx, cx);
    co->unit = word_term({});
    co->delta = make_chain_map(cx, co->cc, 0, [&](TermRef w) {
        FormalSum out;  // split the word at every position; deconcatenation has no signs
        for (size_t k = 0; k <= w->letters.size(); ++k) {
            std::vector<TermRef> lo(w->letters.begin(), w->letters.begin() + k);
            std::vector<TermRef> hi(w->letters.begin() + k, w->letters.end());
            out.add(pair_term(word_term(std::move(lo)), word_term(std::move(hi))), 1);
        }
        return out;
    });
    verify_coalgebra(*co, trunc);
    return co;
}

int capped_validity(CoalgebraPtr c, int trunc, int word_cap) {
    if (word_cap < 0) return trunc - 1;
    int dmin = -1;
    for (int d = 1; d <= c->c->trunc; ++d)
        if (c->c->dim(d) > 0) {
            dmin = d - 1;  // minimum cobar letter degree
            break;
        }
    if (dmin < 0) return trunc - 1;
    long long v = static_cast<long long>(word_cap) * std::max(dmin, 1) - 1;
    return static_cast<int>(std::min<long long>(trunc - 1, v));
}

/* ------------------------- bimodules ------------------------- */

void verify_bimodule(const Bimodule& b, int up_to) {
    const ChainAlgebra& A = *b.over;
    const FreeChainComplex& M = *b.m;
    int T = std::min({up_to, M.trunc, A.c->trunc});

    ComplexPtr am = tensor_complex(A.c, b.m);
    ComplexPtr ma = tensor_complex(b.m, A.c);
    ChainMap lm = make_chain_map(am, b.m, 0, [&](TermRef t) { return b.left(t->left, t->right); });
    ChainMap rm = make_chain_map(ma, b.m, 0, [&](TermRef t) { return b.right(t->left, t->right); });
    if (auto w = chain_map_defect(lm, T))
        fail("NotABimodule", "left action fails the Leibniz rule at " + to_string(w->basis_elt) +
                                 ", defect " + to_string(w->defect));
    if (auto w = chain_map_defect(rm, T))
        fail("NotABimodule", "right action fails the Leibniz rule at " + to_string(w->basis_elt) +
                                 ", defect " + to_string(w->defect));

    for (int n = 0; n <= T; ++n)
        for (TermRef x : M.basis[n]) {
            if (!(b.left(A.unit, x) - FormalSum(x)).zero())
                fail("NotABimodule", "unit does not act as identity on the left of " + to_string(x));
            if (!(b.right(x, A.unit) - FormalSum(x)).zero())
                fail("NotABimodule", "unit does not act as identity on the right of " + to_string(x));
        }

    auto act_left = [&](const FormalSum& s, TermRef x) {
        FormalSum out;
        for (const auto& [t, k] : s.c) out += k * b.left(t, x);
        return out;
    };
    auto act_right = [&](TermRef x, const FormalSum& s) {
        FormalSum out;
        for (const auto& [t, k] : s.c) out += k * b.right(x, t);
        return out;
    };
    for (int p = 0; p <= T; ++p)
        for (int q = 0; p + q <= T; ++q)
            for (int r = 0; p + q + r <= T; ++r)
                for (TermRef u : A.c->basis[p])
                    for (TermRef v : A.c->basis[q])
                        for (TermRef x : M.basis[r]) {
                            FormalSum uv = A.mul(u, v);
                            FormalSum lhs, rhs;
                            // (uv).x = u.(v.x)
                            lhs = act_left(uv, x);
                            for (const auto& [t, k] : b.left(v, x).c) lhs -= k * b.left(u, t);
                            if (!lhs.zero())
                                fail("NotABimodule", "left action not associative at (" + to_string(u) +
                                                         ", " + to_string(v) + ", " + to_string(x) + ")");
                            // x.(uv) = (x.u).v
                            rhs = act_right(x, uv);
                            for (const auto& [t, k] : b.right(x, u).c) rhs -= k * b.right(t, v);
                            if (!rhs.zero())
                                fail("NotABimodule", "right action not associative at (" + to_string(x) +
                                                         ", " + to_string(u) + ", " + to_string(v) + ")");
                            // (u.x).v = u.(x.v)
                            FormalSum comm;
                            for (const auto& [t, k] : b.left(u, x).c) comm += k * b.right(t, v);
                            for (const auto& [t, k] : b.right(x, v).c) comm -= k * b.left(u, t);
                            if (!comm.zero())
                                fail("NotABimodule", "left and right actions do not commute at (" +
                                                         to_string(u) + ", " + to_string(x) + ", " +
                                                         to_string(v) + ")");
                        }
}

BimodulePtr make_bimodule(ComplexPtr m, AlgebraPtr over,
                          const std::function<FormalSum(TermRef, TermRef)>& left,
                          const std::function<FormalSum(TermRef, TermRef)>& right, TermRef unit,
                          bool verify) {
    auto b = std::make_shared<Bimodule>();
    b->m = m;
    b->over = over;
    b->left = left;
    b->right = right;
    b->unit = unit;
    if (verify) verify_bimodule(*b);
    return b;
}

BimodulePtr self_bimodule(AlgebraPtr a) {
    auto mul = a->mul;
    return make_bimodule(
        a->c, a, [mul](TermRef u, TermRef x) { return mul(u, x); },
        [mul](TermRef x, TermRef u) { return mul(x, u); }, a->unit, false);
}

BimodulePtr trivial_bimodule(AlgebraPtr a) {
    ComplexBuilder bld("Z", a->c->trunc);
    TermRef z = atom("Z", 0);
    bld.add(z);
    ComplexPtr m = bld.finish([](TermRef) { return FormalSum(); });
    return make_bimodule(
        m, a, [](TermRef u, TermRef x) { return u->degree == 0 ? FormalSum(x) : FormalSum(); },
        [](TermRef x, TermRef u) { return u->degree == 0 ? FormalSum(x) : FormalSum(); }, z, false);
}

/* ------------------------- Hochschild ------------------------- */

Hochschild hochschild(AlgebraPtr a, BimodulePtr m, int trunc, int word_cap, bool verify) {
    if (m->over != a) fail("NotABimodule", "coefficient bimodule is not over the given algebra");
    if (verify) verify_bimodule(*m, trunc);
    CoalgebraPtr bc = bar(a, trunc, word_cap);
    const FreeChainComplex& M = *m->m;
    const ChainAlgebra& A = *a;

    std::string name = "Hoch(" + A.c->name + "; " + M.name + ")";
    ComplexBuilder bld(name, trunc);
    for (int n = 0; n <= trunc; ++n)
        for (int p = 0; p <= n; ++p)
            for (TermRef w : bc->c->basis[p]) {
                if (n - p > M.trunc) continue;
                for (TermRef x : M.basis[n - p]) bld.add(pair_term(w, x));
            }

    /* d(w (x) x) = d_B(w) (x) x + (-1)^{|w|} w (x) dx
     *            - (-1)^{|w| - |s a_n|} (w minus last) (x) a_n . x
     *            + (-1)^{|a_1| (|w| - |s a_1| + |x|)} (w minus first) (x) x . a_1
     * The sign flip on the adjacent action term (and only it) is forced by
     * d^2 = 0 against the bar merge; the wrap-around term keeps the plain
     * Koszul sign of moving a_1 past the rest of the word and the module. */
    auto rule = [&](TermRef t) {
        TermRef w = t->left, x = t->right;
        const auto& ls = w->letters;
        FormalSum out;
        for (const auto& [u, k] : bc->c->boundary(w).c) out.add(pair_term(u, x), k);
        for (const auto& [u, k] : M.boundary(x).c)
            out.add(pair_term(w, u), k * parity_sign(w->degree));
        if (!ls.empty()) {
            TermRef an = ls.back()->child;
            int sa = -parity_sign(w->degree - ls.back()->degree);
            TermRef head = word_term(std::vector<TermRef>(ls.begin(), ls.end() - 1));
            for (const auto& [u, k] : m->left(an, x).c) out.add(pair_term(head, u), k * sa);
            TermRef a1 = ls.front()->child;
            int sb = parity_sign(static_cast<long long>(a1->degree) *
                                 (w->degree - ls.front()->degree + x->degree));
            TermRef tail = word_term(std::vector<TermRef>(ls.begin() + 1, ls.end()));
            for (const auto& [u, k] : m->right(x, a1).c) out.add(pair_term(tail, u), k * sb);
        }
        return out;
    };
    Hochschild h;
    h.complex = bld.finish(rule);
    h.alg = a;
    h.coef = m;
    h.bar_coalg = bc;
    TermRef empty = word_term({});
    h.incl_coef = make_chain_map(m->m, h.complex,
                                 0, [&](TermRef x) { return FormalSum(pair_term(empty, x)); });
    h.proj_bar = make_chain_map(h.complex, bc->c, 0, [&](TermRef t) {
        return t->right->degree == 0 ? FormalSum(t->left) : FormalSum();
    });
    return h;
}

/* ------------------------- bicomodule constructors ------------------------- */

BicomodulePtr trivial_bicomodule(CoalgebraPtr c) {
    if (!c->unit) fail("NotABicomodule", "coalgebra has no coaugmentation");
    ComplexBuilder bld("Z", c->c->trunc);
    TermRef z = atom("Z", 0);
    bld.add(z);
    ComplexPtr m = bld.finish([](TermRef) { return FormalSum(); });
    TermRef v = c->unit;
    return make_bicomodule(
        m, c, [v](TermRef x) { return FormalSum(pair_term(v, x)); },
        [v](TermRef x) { return FormalSum(pair_term(x, v)); }, z, false);
}

BicomodulePtr trivial_left_bicomodule(CoalgebraPtr c) {
    if (!c->unit) fail("NotABicomodule", "coalgebra has no coaugmentation");
    TermRef v = c->unit;
    CoalgebraPtr cc = c;
    return make_bicomodule(
        c->c, c, [v](TermRef x) { return FormalSum(pair_term(v, x)); },
        [cc](TermRef x) {
            FormalSum out;
            for (const auto& [a, b, k] : cc->sweedler(x)) out.add(pair_term(a, b), k);
            return out;
        },
        v, true);
}

BicomodulePtr square_bicomodule(CoalgebraPtr c) {
    if (!c->unit) fail("NotABicomodule", "coalgebra has no coaugmentation");
    CoalgebraPtr cc = c;
    auto left = [cc](TermRef t) {  // (Delta (x) 1)(x (x) x'), no Koszul sign (Delta has degree 0)
        FormalSum out;
        for (const auto& [a, b, k] : cc->sweedler(t->left)) out.add(pair_term(a, pair_term(b, t->right)), k);
        return out;
    };
    auto right = [cc](TermRef t) {  // (1 (x) Delta)(x (x) x')
        FormalSum out;
        for (const auto& [a, b, k] : cc->sweedler(t->right)) out.add(pair_term(pair_term(t->left, a), b), k);
        return out;
    };
    return make_bicomodule(c->cc, c, left, right, pair_term(c->unit, c->unit), true);
}

BicomodulePtr maps_bicomodule(CoalgebraPtr ck, CoalgebraPtr cl, const ChainMap& g,
                              const ChainMap& h) {
    if (!ck->unit) fail("NotABicomodule", "source coalgebra has no coaugmentation");
    CoalgebraPtr K = ck;
    ChainMap gg = g, hh = h;
    auto left = [K, gg](TermRef x) {  // (g (x) 1) Delta, g of degree 0: no signs
        FormalSum out;
        for (const auto& [a, b, k] : K->sweedler(x))
            for (const auto& [t, kg] : gg.apply(a).c) out.add(pair_term(t, b), k * kg);
        return out;
    };
    auto right = [K, hh](TermRef x) {  // (1 (x) h) Delta
        FormalSum out;
        for (const auto& [a, b, k] : K->sweedler(x))
            for (const auto& [t, kh] : hh.apply(b).c) out.add(pair_term(a, t), k * kh);
        return out;
    };
    return make_bicomodule(ck->c, cl, left, right, ck->unit, true);
}

/* ------------------------- coHochschild ------------------------- */

CoHochschild cohochschild(BicomodulePtr n, int trunc, int word_cap, bool verify) {
    CoalgebraPtr c = n->over;
    require_connected(*c->c, "cohochschild");
    if (!n->unit) fail("NotABicomodule", "coefficient bicomodule has no coaugmentation");
    if (verify) verify_bicomodule(*n, trunc);
    AlgebraPtr omega = cobar(c, trunc, word_cap);  // throws InfiniteLevel when uncapped degree-0 letters
    const FreeChainComplex& N = *n->n;

    std::string name = "coHoch(" + N.name + "; " + c->c->name + ")";
    if (word_cap >= 0) name += "[cap " + std::to_string(word_cap) + "]";
    ComplexBuilder bld(name, trunc);
    for (int ntot = 0; ntot <= trunc; ++ntot)
        for (int p = 0; p <= ntot; ++p) {
            if (p > N.trunc) continue;
            for (TermRef x : N.basis[p])
                for (TermRef w : omega->c->basis[ntot - p]) bld.add(pair_term(x, w));
        }

    /* d(x (x) w) = dx (x) w + (-1)^{|x|} x (x) d_Omega(w)
     *            - (-1)^{|x_j|}      x_j (x) s^{-1}e^j | w        (rho(x) = x_j (x) e^j)
     *            + (-1)^{(|e_i|+1)(|x^i|+|w|)} x^i (x) w | s^{-1}e_i   (lambda(x) = e_i (x) x^i)
     * s^{-1} of a degree-0 class is 0, so counit components drop out. */
    auto rule = [&](TermRef t) {
        TermRef x = t->left, w = t->right;
        FormalSum out;
        for (const auto& [u, k] : N.boundary(x).c) out.add(pair_term(u, w), k);
        for (const auto& [u, k] : omega->c->boundary(w).c)
            out.add(pair_term(x, u), k * parity_sign(x->degree));
        bool room = word_cap < 0 || static_cast<int>(w->letters.size()) + 1 <= word_cap;
        if (room) {
            for (const auto& [xj, ej, k] : n->sweedler_right(x)) {
                if (ej->degree == 0) continue;
                out.add(pair_term(xj, word_term(splice_letters(w->letters, 0, 0, {shift_term(ej, -1)}))),
                        -k * parity_sign(xj->degree));
            }
            for (const auto& [ei, xi, k] : n->sweedler_left(x)) {
                if (ei->degree == 0) continue;
                std::vector<TermRef> ls(w->letters);
                ls.push_back(shift_term(ei, -1));
                out.add(pair_term(xi, word_term(std::move(ls))),
                        k * parity_sign(static_cast<long long>(ei->degree + 1) *
                                        (xi->degree + w->degree)));
            }
        }
        return out;
    };
    CoHochschild hh;
    hh.complex = bld.finish(rule);
    hh.coef = n;
    hh.over = c;
    hh.omega = omega;
    hh.word_cap = word_cap;
    hh.valid_up_to = capped_validity(c, trunc, word_cap);
    TermRef un = n->unit;
    hh.incl_cobar = make_chain_map(omega->c, hh.complex,
                                   0, [un](TermRef w) { return FormalSum(pair_term(un, w)); });
    hh.proj_coef = make_chain_map(hh.complex, n->n, 0, [](TermRef t) {
        return t->right->letters.empty() ? FormalSum(t->left) : FormalSum();
    });
    return hh;
}

/* ------------------------- bar-cobar unit ------------------------- */

namespace {

/* All ways of writing the reduced iterated diagonal of t with k factors, each
 * of positive degree; coassociativity makes the expansion order immaterial. */
std::vector<std::pair<std::vector<TermRef>, Int>> iterated_reduced(const ChainCoalgebra& C,
                                                                   TermRef t, int k) {
    std::vector<std::pair<std::vector<TermRef>, Int>> out;
    if (k == 1) {
        out.push_back({{t}, 1});
        return out;
    }
    for (const auto& [a, b, kk] : C.sweedler_reduced(t))
        for (const auto& [rest, k2] : iterated_reduced(C, b, k - 1)) {
            std::vector<TermRef> f;
            f.reserve(rest.size() + 1);
            f.push_back(a);
            f.insert(f.end(), rest.begin(), rest.end());
            out.push_back({std::move(f), kk * k2});
        }
    return out;
}

}  // namespace

BarCobarUnit bar_cobar_unit(CoalgebraPtr c, int trunc) {
    BarCobarUnit u;
    u.omega = cobar(c, trunc, -1);
    u.barcobar = bar(u.omega, trunc, -1);
    const ChainCoalgebra& C = *c;
    TermRef empty = word_term({});
    u.eta = make_chain_map(c->c, u.barcobar->c, 0, [&](TermRef t) {
        if (t->degree == 0) return FormalSum(empty);
        FormalSum out;  // every coefficient is +1: all operators involved have degree 0
        for (int k = 1; k <= t->degree; ++k)
            for (const auto& [factors, kk] : iterated_reduced(C, t, k)) {
                std::vector<TermRef> ls;
                ls.reserve(factors.size());
                for (TermRef f : factors)
                    ls.push_back(shift_term(word_term({shift_term(f, -1)}), +1));
                out.add(word_term(std::move(ls)), kk);
            }
        return out;
    });
    return u;
}

/* ------------------------- two-sided cobar ------------------------- */

TwoSidedCobar two_sided_cobar(CoalgebraPtr c, int trunc, int word_cap) {
    const ChainCoalgebra& C = *c;
    AlgebraPtr omega = cobar(c, trunc, word_cap);

    ComplexBuilder bld("TwoSided(" + C.c->name + ")", trunc);
    for (int ntot = 0; ntot <= trunc; ++ntot)
        for (int px = 0; px <= ntot; ++px) {
            if (px > C.c->trunc) continue;
            for (TermRef x : C.c->basis[px])
                for (int pw = 0; pw + px <= ntot; ++pw)
                    for (TermRef w : omega->c->basis[pw]) {
                        int py = ntot - px - pw;
                        if (py > C.c->trunc) continue;
                        for (TermRef y : C.c->basis[py]) bld.add(pair_term(pair_term(x, w), y));
                    }
        }

    /* D(x (x) w (x) y) = dx (x) w (x) y + (-1)^{|x|} x (x) d_Omega(w) (x) y
     *                  + (-1)^{|x|+|w|} x (x) w (x) dy
     *                  - (-1)^{|x_(1)|} x_(1) (x) s^{-1}x_(2) | w (x) y
     *                  + (-1)^{|x|+|w|} x (x) w | s^{-1}y_(1) (x) y_(2)
     * (the twists keep only diagonal components whose cobar factor has
     * positive degree). */
    auto rule = [&](TermRef t) {
        TermRef x = t->left->left, w = t->left->right, y = t->right;
        FormalSum out;
        for (const auto& [u, k] : C.c->boundary(x).c) out.add(pair_term(pair_term(u, w), y), k);
        int sx = parity_sign(x->degree);
        for (const auto& [u, k] : omega->c->boundary(w).c)
            out.add(pair_term(pair_term(x, u), y), k * sx);
        int sxw = parity_sign(x->degree + w->degree);
        for (const auto& [u, k] : C.c->boundary(y).c)
            out.add(pair_term(pair_term(x, w), u), k * sxw);
        bool room = word_cap < 0 || static_cast<int>(w->letters.size()) + 1 <= word_cap;
        if (room) {
            for (const auto& [a, b, k] : C.sweedler(x)) {
                if (b->degree == 0) continue;
                TermRef nw = word_term(splice_letters(w->letters, 0, 0, {shift_term(b, -1)}));
                out.add(pair_term(pair_term(a, nw), y), -k * parity_sign(a->degree));
            }
            for (const auto& [a, b, k] : C.sweedler(y)) {
                if (a->degree == 0) continue;
                std::vector<TermRef> ls(w->letters);
                ls.push_back(shift_term(a, -1));
                out.add(pair_term(pair_term(x, word_term(std::move(ls))), b), k * sxw);
            }
        }
        return out;
    };
    TwoSidedCobar ts;
    ts.complex = bld.finish(rule);
    ts.omega = omega;
    return ts;
}

ChainMap cohoch_to_two_sided(const CoHochschild& hh, const TwoSidedCobar& ts) {
    return make_chain_map(hh.complex, ts.complex, 0, [](TermRef t) {
        TermRef x = t->left->left, xp = t->left->right, w = t->right;
        int sgn = pass_sign(x->degree, xp->degree + w->degree);
        return FormalSum(pair_term(pair_term(xp, w), x), sgn);
    });
}

/* ------------------------- norm operator ------------------------- */

FormalSum norm_operator(TermRef word) {
    if (word->kind != TermKind::word) fail("MalformedDocument", "norm operator expects a word term");
    const auto& ls = word->letters;
    int n = static_cast<int>(ls.size());
    if (n <= 1) return FormalSum(word);
    std::vector<int> degs(n);
    for (int i = 0; i < n; ++i) degs[i] = ls[i]->degree;
    FormalSum out;
    for (int r = 0; r < n; ++r) {
        std::vector<int> perm(n);
        std::vector<TermRef> rot(n);
        for (int i = 0; i < n; ++i) {
            perm[i] = (i + r) % n;
            rot[i] = ls[perm[i]];
        }
        out.add(word_term(std::move(rot)), koszul_perm_sign(degs, perm) * perm_parity_sign(perm));
    }
    return out;
}

}  // namespace cohoch
