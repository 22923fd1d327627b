#include "dcsh.hpp"

#include "koszul.hpp"

#include <algorithm>

namespace cohoch {

namespace {

TermRef concat_words(TermRef a, TermRef b) {
    std::vector<TermRef> ls;
    ls.reserve(a->letters.size() + b->letters.size());
    ls.insert(ls.end(), a->letters.begin(), a->letters.end());
    ls.insert(ls.end(), b->letters.begin(), b->letters.end());
    return word_term(std::move(ls));
}

/* Koszul sign of (s^{-1})^{(x) k} against the unshifted letter degrees; the
 * conjugation sign is its own inverse on each word. */
int shift_word_sign(const std::vector<int>& degs) {
    return ops_tensor_sign(std::vector<int>(degs.size(), -1), degs);
}

FormalSum shift_word(TermRef w, int dir) {
    std::vector<TermRef> ls;
    std::vector<int> degs;
    ls.reserve(w->letters.size());
    for (TermRef l : w->letters) {
        TermRef plain = dir < 0 ? l : l->child;
        degs.push_back(plain->degree);
        ls.push_back(dir < 0 ? shift_term(l, -1) : plain);
    }
    return FormalSum(word_term(std::move(ls)), shift_word_sign(degs));
}

/* boundary with the degree-0 part dropped (all word complexes see only the
 * reduced part of their letters) */
FormalSum reduced_boundary(const FreeChainComplex& c, TermRef t) {
    FormalSum out;
    for (const auto& [u, k] : c.boundary(t).c)
        if (u->degree > 0) out.add(u, k);
    return out;
}

void require_on_sdr(const EZData& s) {
    if (s.x->c != s.sdr.x || s.y->c != s.sdr.y)
        throw std::logic_error("EZData coalgebras must live on the SDR complexes");
    if (s.x->c->dim(0) != 1 || s.y->c->dim(0) != 1)
        fail("NotConnected", "twisting cochain transfer requires connected endpoints");
}

/* Closed-form slot conventions, fixed once by the recursive/closed agreement
 * gate: alternating slot sign, the Koszul pass of the degree +1 operator
 * Delta h across the prefix, and a constant global -1 for every k >= 2. */
int closed_slot_sign(int slot) { return parity_sign(slot); }
int closed_global_sign(int /*k*/) { return -1; }

/* Shared tables for the transfer: the reduced diagonal of h per source
 * letter, the H towers (words of plain source letters), and the closed-form
 * components. */
struct GMCtx {
    const EZData& s;
    int gen_hi;
    std::unordered_map<TermRef, FormalSum> dh;  // letter -> sum of pair terms

    GMCtx(const EZData& sdr_data, int trunc) : s(sdr_data) {
        require_on_sdr(s);
        gen_hi = std::min({trunc, s.sdr.h.hi, s.sdr.f.hi});
        for (int n = 1; n <= gen_hi; ++n)
            for (TermRef t : s.y->c->basis[n]) {
                FormalSum acc;
                for (const auto& [u, cu] : s.sdr.h.apply(t).c)
                    for (const auto& [a, b, c2] : s.y->sweedler_reduced(u))
                        acc.add(pair_term(a, b), cu * c2);
                dh.emplace(t, std::move(acc));
            }
    }

    /* one slotwise expansion step: H_m = h_m H_{m-1} */
    FormalSum h_step(const FormalSum& prev, int m) {
        FormalSum out;
        for (const auto& [w, cw] : prev.c) {
            long long prefix = 0;
            for (int slot = 0; slot < m - 1; ++slot) {
                TermRef u = w->letters[slot];
                int sg = closed_slot_sign(slot) * pass_sign(+1, prefix);
                for (const auto& [p, cp] : dh.at(u).c) {
                    std::vector<TermRef> ls(w->letters);
                    ls[slot] = p->left;
                    ls.insert(ls.begin() + slot + 1, p->right);
                    out.add(word_term(std::move(ls)), cw * cp * sg);
                }
                prefix += u->degree;
            }
        }
        return out;
    }

    /* -(s^{-1} f)^{(x) k} applied to one H word */
    FormalSum closed_from_h(const FormalSum& hk, int k) {
        FormalSum out;
        for (const auto& [w, cw] : hk.c) {
            std::vector<int> degs;
            for (TermRef u : w->letters) degs.push_back(u->degree);
            Int coef = cw * closed_global_sign(k) * shift_word_sign(degs);
            FormalSum partial(word_term({}), coef);
            for (TermRef u : w->letters) {
                FormalSum next;
                for (const auto& [x, cx] : s.sdr.f.apply(u).c)
                    for (const auto& [pw, cp] : partial.c)
                        next.add(concat_words(pw, word_term({shift_term(x, -1)})), cp * cx);
                partial = std::move(next);
            }
            out += partial;
        }
        return out;
    }
};

std::string letter_witness(TermRef t) {
    return to_string(t) + " (degree " + std::to_string(t->degree) + ")";
}

}  // namespace

/* ------------------------------- views ------------------------------- */

FormalSum TwistingCochain::apply(int k, TermRef e) const {
    if (k < 1 || k > cap) return {};
    auto it = fk[k].find(e);
    return it == fk[k].end() ? FormalSum() : it->second;
}

FormalSum TwistingCochain::image(TermRef e) const {
    FormalSum out;
    for (int k = 1; k <= cap; ++k) out += apply(k, e);
    return out;
}

FormalSum DCSHFamily::apply(int k, TermRef e) const {
    if (k < 1 || k > cap) return {};
    auto it = omega[k].find(e);
    return it == omega[k].end() ? FormalSum() : it->second;
}

DCSHFamily family_of(const TwistingCochain& t) {
    DCSHFamily f;
    f.source = t.source;
    f.target = t.target;
    f.cap = t.cap;
    f.gen_hi = t.gen_hi;
    f.vanish = t.vanish;
    f.omega.assign(t.cap + 1, {});
    for (int k = 1; k <= t.cap; ++k)
        for (const auto& [e, val] : t.fk[k]) {
            FormalSum out;
            for (const auto& [w, c] : val.c) out += c * shift_word(w, +1);
            f.omega[k].emplace(e, std::move(out));
        }
    return f;
}

TwistingCochain cochain_of(const DCSHFamily& f) {
    TwistingCochain t;
    t.source = f.source;
    t.target = f.target;
    t.cap = f.cap;
    t.gen_hi = f.gen_hi;
    t.vanish = f.vanish;
    t.fk.assign(f.cap + 1, {});
    for (int k = 1; k <= f.cap; ++k)
        for (const auto& [e, val] : f.omega[k]) {
            FormalSum out;
            for (const auto& [w, c] : val.c) out += c * shift_word(w, -1);
            t.fk[k].emplace(e, std::move(out));
        }
    return t;
}

/* ------------------------------- constructors ------------------------------- */

DCSHFamily strict_family(CoalgebraPtr source, CoalgebraPtr target, const ChainMap& f) {
    if (f.src != source->c || f.dst != target->c || f.deg != 0)
        throw std::logic_error("strict_family: f must be a degree-0 map source -> target");
    DCSHFamily om;
    om.source = source;
    om.target = target;
    om.cap = 1;
    om.gen_hi = f.hi;
    om.omega.assign(2, {});
    for (int n = 1; n <= f.hi; ++n)
        for (TermRef t : source->c->basis[n]) {
            FormalSum w;
            for (const auto& [u, cu] : f.apply(t).c)
                if (u->degree > 0) w.add(word_term({u}), cu);
            om.vanish.emplace(t, w.zero() ? 0 : 1);
            om.omega[1].emplace(t, std::move(w));
        }
    return om;
}

DCSHFamily precompose_strict(const DCSHFamily& fam, const ChainMap& g, CoalgebraPtr source) {
    if (g.src != source->c || g.dst != fam.source->c || g.deg != 0)
        throw std::logic_error("precompose_strict: g must be a degree-0 map source -> fam.source");
    DCSHFamily om;
    om.source = source;
    om.target = fam.target;
    om.cap = fam.cap;
    om.gen_hi = std::min(g.hi, fam.gen_hi);
    om.omega.assign(om.cap + 1, {});
    for (int n = 1; n <= om.gen_hi; ++n)
        for (TermRef t : source->c->basis[n]) {
            int top = 0;
            for (int k = 1; k <= om.cap; ++k) {
                FormalSum out;
                for (const auto& [u, cu] : g.apply(t).c)
                    if (u->degree > 0) out += cu * fam.apply(k, u);
                if (!out.zero()) top = k;
                om.omega[k].emplace(t, std::move(out));
            }
            om.vanish.emplace(t, top);
        }
    return om;
}

/* ------------------------------- EZ data ------------------------------- */

EZData ez_data(const EMSDR& e, bool verify, int check_up_to) {
    EZData z;
    z.sdr = e.sdr;
    z.y = e.cy;
    z.x = tensor_coalgebra(e.ck, e.cl, -1, e.sdr.x);
    if (z.y->c != z.sdr.y) throw std::logic_error("ez_data: product chains mismatch");
    if (verify) {
        verify_coalgebra(*z.x, check_up_to);
        verify_coalgebra(*z.y, check_up_to);
        ChainMap lhs = compose(z.y->delta, z.sdr.nabla);
        ChainMap rhs =
            compose(tensor_map(z.sdr.nabla, z.sdr.nabla, z.x->cc, z.y->cc), z.x->delta);
        if (auto w = map_difference_witness(lhs, rhs, check_up_to))
            fail("NotEZData", "nabla is not a coalgebra map at " + to_string(w->basis_elt) +
                                  ", defect " + to_string(w->defect));
    }
    return z;
}

/* ------------------------------- transfer ------------------------------- */

FormalSum closed_fk(const EZData& s, int trunc, int k, TermRef y_letter) {
    if (k < 1) return {};
    GMCtx ctx(s, trunc);
    if (y_letter->degree < 1 || y_letter->degree > ctx.gen_hi)
        throw std::out_of_range("closed_fk: letter outside the covered range");
    if (k == 1) {
        FormalSum out;
        for (const auto& [x, cx] : s.sdr.f.apply(y_letter).c)
            out.add(word_term({shift_term(x, -1)}), cx);
        return out;
    }
    FormalSum h(word_term({y_letter}), 1);
    for (int m = 2; m <= k; ++m) h = ctx.h_step(h, m);
    return ctx.closed_from_h(h, k);
}

DCSHFamily gm_twisting_cochain(const EZData& s, int trunc, int cap) {
    GMCtx ctx(s, trunc);
    if (cap < 0) cap = trunc + 1;
    const FreeChainComplex& y = *s.y->c;

    TwistingCochain tc;
    tc.source = s.y;
    tc.target = s.x;
    tc.cap = cap;
    tc.gen_hi = ctx.gen_hi;
    tc.fk.assign(cap + 1, {});

    /* recursion, letters by ascending degree so every referenced table row
     * (strictly smaller degree, or same degree with smaller k) exists */
    for (int n = 1; n <= ctx.gen_hi; ++n) {
        for (TermRef t : y.basis[n]) {
            FormalSum f1;
            for (const auto& [x, cx] : s.sdr.f.apply(t).c)
                f1.add(word_term({shift_term(x, -1)}), cx);
            tc.fk[1].emplace(t, std::move(f1));
        }
        for (int k = 2; k <= cap; ++k)
            for (TermRef t : y.basis[n]) {
                FormalSum out;
                for (const auto& [p, cp] : ctx.dh.at(t).c) {
                    TermRef a = p->left, b = p->right;
                    Int base = -cp * parity_sign(a->degree);
                    for (int i = 1; i < k; ++i) {
                        const FormalSum& fa = tc.fk[i].at(a);
                        const FormalSum& fb = tc.fk[k - i].at(b);
                        if (fa.zero() || fb.zero()) continue;
                        for (const auto& [wa, ca] : fa.c)
                            for (const auto& [wb, cb] : fb.c)
                                out.add(concat_words(wa, wb), base * ca * cb);
                    }
                }
                tc.fk[k].emplace(t, std::move(out));
            }
    }

    /* H towers: closed-form agreement for k <= cap, vanishing certificate at
     * cap + 1 (a zero H level forces all later levels to zero) */
    std::unordered_map<TermRef, FormalSum> h;
    for (int n = 1; n <= ctx.gen_hi; ++n)
        for (TermRef t : y.basis[n]) h.emplace(t, FormalSum(word_term({t}), 1));
    for (int k = 2; k <= cap + 1; ++k) {
        bool level_zero = true;
        for (auto& [t, val] : h) {
            val = ctx.h_step(val, k);
            if (!val.zero()) level_zero = false;
            if (k <= cap) {
                FormalSum diff = ctx.closed_from_h(val, k) - tc.fk[k].at(t);
                if (!diff.zero())
                    throw std::logic_error(
                        "gm_twisting_cochain: recursive and closed forms disagree at " +
                        letter_witness(t) + ", k = " + std::to_string(k) + ": " +
                        to_string(diff));
            } else if (!val.zero()) {
                fail("NoLocalFiniteness",
                     "component " + std::to_string(k) + " not certified to vanish at " +
                         letter_witness(t) + "; raise the cap");
            }
        }
        if (level_zero) break;
    }

    for (int n = 1; n <= ctx.gen_hi; ++n)
        for (TermRef t : y.basis[n]) {
            int top = 0;
            for (int k = 1; k <= cap; ++k)
                if (!tc.fk[k].at(t).zero()) top = k;
            tc.vanish.emplace(t, top);
        }
    return family_of(tc);
}

/* ------------------------------- coherence ------------------------------- */

DCSHReport verify_dcsh(const DCSHFamily& om, int trunc) {
    const FreeChainComplex& src = *om.source->c;
    const FreeChainComplex& tgt = *om.target->c;
    DCSHReport rep;
    rep.hi = std::min(trunc, om.gen_hi);
    rep.max_k = om.cap + 1;
    for (int k = 1; k <= rep.max_k; ++k)
        for (int n = 1; n <= rep.hi; ++n)
            for (TermRef e : src.basis[n]) {
                FormalSum r;
                for (const auto& [u, cu] : reduced_boundary(src, e).c)
                    r += cu * om.apply(k, u);

                int dsign = parity_sign(k);
                for (const auto& [w, cw] : om.apply(k, e).c) {
                    long long prefix = 0;
                    for (int slot = 0; slot < k; ++slot) {
                        TermRef u = w->letters[slot];
                        int sg = dsign * pass_sign(-1, prefix);
                        for (const auto& [v, cv] : reduced_boundary(tgt, u).c) {
                            std::vector<TermRef> ls(w->letters);
                            ls[slot] = v;
                            r.add(word_term(std::move(ls)), cw * cv * sg);
                        }
                        prefix += u->degree;
                    }
                }

                for (const auto& [a, b, c2] : om.source->sweedler_reduced(e))
                    for (int i = 1; i < k; ++i) {
                        int j = k - i;
                        const FormalSum fa = om.apply(i, a);
                        const FormalSum fb = om.apply(j, b);
                        if (fa.zero() || fb.zero()) continue;
                        Int base = -c2 * parity_sign(static_cast<long long>(j) * (i - 1)) *
                                   pass_sign(j - 1, a->degree);
                        for (const auto& [wa, ca] : fa.c)
                            for (const auto& [wb, cb] : fb.c)
                                r.add(concat_words(wa, wb), base * ca * cb);
                    }

                for (const auto& [w, cw] : om.apply(k - 1, e).c)
                    for (int slot = 0; slot + 1 < k; ++slot) {
                        TermRef u = w->letters[slot];
                        int sg = parity_sign(slot);
                        for (const auto& [x2, y2, c2] : om.target->sweedler_reduced(u)) {
                            std::vector<TermRef> ls(w->letters);
                            ls[slot] = x2;
                            ls.insert(ls.begin() + slot + 1, y2);
                            r.add(word_term(std::move(ls)), cw * c2 * sg);
                        }
                    }

                DCSHReport::Line line;
                line.k = k;
                line.e = e;
                line.ok = r.zero();
                line.residual = std::move(r);
                if (!line.ok) rep.ok = false;
                rep.lines.push_back(std::move(line));
            }
    return rep;
}

/* ------------------------------- realization ------------------------------- */

Realization realize(const DCSHFamily& om, int trunc, int word_cap, bool check) {
    int letter_hi = std::min(om.source->c->trunc, trunc + 1);
    if (letter_hi > om.gen_hi)
        throw std::out_of_range("realize: the cobar basis through degree " +
                                std::to_string(trunc) + " uses letters up to degree " +
                                std::to_string(letter_hi) + ", beyond the family's range " +
                                std::to_string(om.gen_hi));
    if (check) {
        DCSHReport rep = verify_dcsh(om, letter_hi);
        if (!rep.ok)
            for (const auto& line : rep.lines)
                if (!line.ok)
                    fail("IncoherentFamily",
                         "condition k = " + std::to_string(line.k) + " fails at " +
                             letter_witness(line.e) + ", residual " + to_string(line.residual));
    }

    Realization r;
    r.src = cobar(om.source, trunc, word_cap);
    r.dst = cobar(om.target, trunc, word_cap);

    TwistingCochain tc = cochain_of(om);
    std::unordered_map<TermRef, FormalSum> img;
    for (int n = 1; n <= letter_hi; ++n)
        for (TermRef t : om.source->c->basis[n]) img.emplace(t, tc.image(t));

    auto rule = [&](TermRef w) {
        FormalSum acc(word_term({}), 1);
        for (TermRef l : w->letters) {
            FormalSum next;
            for (const auto& [gi, cg] : img.at(l->child).c) {
                if (word_cap >= 0 &&
                    static_cast<int>(gi->letters.size()) > word_cap)
                    continue;
                for (const auto& [pw, cp] : acc.c) {
                    TermRef joined = concat_words(pw, gi);
                    if (word_cap >= 0 &&
                        static_cast<int>(joined->letters.size()) > word_cap)
                        continue;
                    next.add(joined, cp * cg);
                }
            }
            acc = std::move(next);
        }
        return project_to(*r.dst->c, acc);
    };
    r.map = make_chain_map(r.src->c, r.dst->c, 0, rule);

    if (check)
        if (auto w = chain_map_defect(r.map))
            throw std::logic_error("realize: coherent family produced a non-chain map at " +
                                   to_string(w->basis_elt) + ", defect " + to_string(w->defect));
    return r;
}

}  // namespace cohoch
