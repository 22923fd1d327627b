#include "sdr.hpp"

#include "koszul.hpp"

#include <algorithm>

namespace cohoch {

namespace {

/* enumerate all size-r subsets of the integer interval [lo, hi] */
void for_each_subset(int lo, int hi, int r,
                     const std::function<void(const std::vector<int>&)>& fn) {
    int n = hi - lo + 1;
    if (r < 0 || r > n) return;
    std::vector<int> pick(r);
    for (int i = 0; i < r; ++i) pick[i] = lo + i;
    while (true) {
        fn(pick);
        int i = r - 1;
        while (i >= 0 && pick[i] == hi - (r - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
}

std::vector<int> complement(int lo, int hi, const std::vector<int>& a) {
    std::vector<int> b;
    size_t p = 0;
    for (int j = lo; j <= hi; ++j) {
        if (p < a.size() && a[p] == j)
            ++p;
        else
            b.push_back(j);
    }
    return b;
}

Simp apply_degeneracies(Simp x, const std::vector<int>& js) {
    for (int j : js) x = SSet::degeneracy_of(x, j);  // ascending = innermost first
    return x;
}

/* x_{0..r}: drop the tail indices r+1..top */
Simp front_face(const SSet& s, Simp x, int r) {
    for (int i = x.dim(); i >= r + 1; --i) x = s.face_of(x, i);
    return x;
}

std::string witness_str(const ChainMapWitness& w) {
    return to_string(w.basis_elt) + "  defect " + to_string(w.defect);
}

}  // namespace

int max_filtration_weight(const SDRData& s) {
    int m = 0;
    for (const auto& level : s.filt)
        for (int w : level) m = std::max(m, w);
    return m;
}

SDRData identity_sdr(ComplexPtr c) {
    SDRData s;
    s.x = c;
    s.y = c;
    s.nabla = identity_map(c);
    s.f = identity_map(c);
    s.h = zero_map(c, c, +1);
    s.filt.resize(c->trunc + 1);
    for (int n = 0; n <= c->trunc; ++n) s.filt[n].assign(c->dim(n), 0);
    return s;
}

SDRReport verify_sdr(const SDRData& s, int up_to) {
    SDRReport rep;
    auto line = [&](const std::string& cond, const std::optional<ChainMapWitness>& w) {
        SDRReport::Line l;
        l.condition = cond;
        l.ok = !w;
        if (w) {
            l.degree = w->degree;
            l.witness = witness_str(*w);
            rep.ok = false;
        }
        rep.lines.push_back(std::move(l));
    };
    ChainMap dy = differential_map(s.y);
    line("f nabla = Id",
         map_difference_witness(compose(s.f, s.nabla), identity_map(s.x), up_to));
    line("d h + h d = nabla f - Id",
         map_difference_witness(map_add(compose(dy, s.h), compose(s.h, dy)),
                                map_sub(compose(s.nabla, s.f), identity_map(s.y)), up_to));
    line("h nabla = 0",
         map_difference_witness(compose(s.h, s.nabla), zero_map(s.x, s.y, +1), up_to));
    line("f h = 0", map_difference_witness(compose(s.f, s.h), zero_map(s.y, s.x, +1), up_to));
    line("h h = 0", map_difference_witness(compose(s.h, s.h), zero_map(s.y, s.y, +2), up_to));
    return rep;
}

/* ------------------------------- EM SDR ------------------------------- */

EMSDR em_sdr(const SSet& k, const SSet& l, int trunc,
             const std::function<int(int, int)>& weight) {
    EMSDR e;
    e.ps = cartesian_product_full(k, l, trunc);
    e.ck = normalized_chains(k, trunc);
    e.cl = normalized_chains(l, trunc);
    e.cy = normalized_chains(e.ps.prod, trunc);
    ComplexPtr x = tensor_complex(e.ck->c, e.cl->c);
    ComplexPtr y = e.cy->c;
    const SSet& prod = e.ps.prod;

    auto katom = [&k](const Simp& s) { return atom(k.names[s.base_dim][s.base_idx], s.base_dim); };
    auto latom = [&l](const Simp& s) { return atom(l.names[s.base_dim][s.base_idx], s.base_dim); };
    auto yatom = [&prod](const Simp& s) {
        return atom(prod.names[s.base_dim][s.base_idx], s.base_dim);
    };
    auto comps = [&e, y](TermRef t) -> const std::pair<Simp, Simp>& {
        return e.ps.cells[t->degree][y->pos(t)];
    };

    /* f(x, y) = sum of front_l (x) back_{n-l}; degenerate halves die */
    ChainMap f = make_chain_map(y, x, 0, [&](TermRef t) {
        int n = t->degree;
        const auto& [u, v] = comps(t);
        FormalSum out;
        for (int lft = 0; lft <= n; ++lft) {
            Simp front = front_face(k, u, lft);
            if (front.degenerate()) continue;
            Simp back = v;
            for (int c = 0; c < lft; ++c) back = l.face_of(back, 0);
            if (back.degenerate()) continue;
            out.add(pair_term(katom(front), latom(back)), 1);
        }
        return out;
    });

    /* nabla(x (x) y) = sum over shuffles (A, B), A applied to the first factor */
    ChainMap nabla = make_chain_map(x, y, 0, [&](TermRef t) {
        TermRef a = t->left, b = t->right;
        int p = a->degree, q = b->degree;
        Simp u{{}, p, k.id_of(p, a->name)};
        Simp v{{}, q, l.id_of(q, b->name)};
        FormalSum out;
        for_each_subset(0, p + q - 1, q, [&](const std::vector<int>& A) {
            std::vector<int> B = complement(0, p + q - 1, A);
            Simp cell = e.ps.normalize_pair(apply_degeneracies(u, A), apply_degeneracies(v, B));
            out.add(yatom(cell), shuffle_sign(A, B));  // disjoint (A,B): never degenerate
        });
        return out;
    });

    /* h(x, y) = sum_{m < r <= n} sum_{A u B = [m+1, n], |A| = n-r}
     *   (-1)^m sign(A, B) (s_{A u {m}} x_{0..r}, s_B y_{0..m r..n}).
     * The factor (-1)^m on top of the plain shuffle sign is the unique
     * quadratic-exponent convention (in m, r, n) making all five SDR
     * conditions hold against the f and nabla above. */
    ChainMap h = make_chain_map(y, y, +1, [&](TermRef t) {
        int n = t->degree;
        const auto& [u, v] = comps(t);
        FormalSum out;
        for (int m = 0; m < n; ++m)
            for (int r = m + 1; r <= n; ++r) {
                Simp fu = front_face(k, u, r);
                Simp fv = v;
                for (int i = r - 1; i >= m + 1; --i) fv = l.face_of(fv, i);
                for_each_subset(m + 1, n, n - r, [&](const std::vector<int>& A) {
                    std::vector<int> B = complement(m + 1, n, A);
                    std::vector<int> Am(1, m);
                    Am.insert(Am.end(), A.begin(), A.end());
                    Simp cell = e.ps.normalize_pair(apply_degeneracies(fu, Am),
                                                    apply_degeneracies(fv, B));
                    if (cell.degenerate()) return;
                    out.add(yatom(cell), parity_sign(m) * shuffle_sign(A, B));
                });
            }
        return out;
    });

    SDRData s;
    s.x = x;
    s.y = y;
    s.nabla = std::move(nabla);
    s.f = std::move(f);
    s.h = std::move(h);
    s.filt.resize(y->trunc + 1);
    for (int n = 0; n <= y->trunc; ++n) {
        s.filt[n].resize(y->dim(n));
        for (int i = 0; i < y->dim(n); ++i)
            s.filt[n][i] = weight ? weight(n, i) : e.ps.weight(n, i);
    }
    e.sdr = std::move(s);
    return e;
}

SMap product_smap(const ProductStructure& src, const SSet& k2, const SSet& l2,
                  const ProductStructure& dst, const SMap& a, const SMap& b) {
    SMap g;
    g.img.resize(src.cells.size());
    for (size_t d = 0; d < src.cells.size(); ++d)
        for (const auto& [u, v] : src.cells[d])
            g.img[d].push_back(dst.normalize_pair(apply_smap(k2, a, u), apply_smap(l2, b, v)));
    return g;
}

/* ------------------------------- perturbation ------------------------------- */

Perturbation differential_difference(ComplexPtr twisted, ComplexPtr plain) {
    ChainMap th;
    th.src = plain;
    th.dst = plain;
    th.deg = -1;
    th.hi = map_hi(*plain, *plain, -1);
    th.m.resize(plain->trunc + 1);
    for (int n = 0; n <= th.hi; ++n) {
        IntMat mm(plain->dim(n - 1), plain->dim(n));
        for (int j = 0; j < plain->dim(n); ++j) {
            TermRef t = plain->basis[n][j];
            if (!twisted->has(t))
                fail("MalformedDocument", "differential_difference: " + to_string(t) +
                                              " missing from " + twisted->name);
            for (const auto& [u, c] : twisted->boundary(t).c) {
                int i = plain->pos(u);
                if (i < 0)
                    fail("MalformedDocument", "differential_difference: " + to_string(u) +
                                                  " missing from " + plain->name);
                mm(i, j) += c;
            }
            for (const auto& [u, c] : plain->boundary(t).c) mm(plain->pos(u), j) -= c;
        }
        th.m[n] = std::move(mm);
    }
    return Perturbation{std::move(th)};
}

SDRData basic_perturbation(const SDRData& s, const Perturbation& p) {
    const ChainMap& th = p.theta;
    if (th.src != s.y || th.dst != s.y || th.deg != -1)
        fail("MalformedDocument", "basic_perturbation: theta must be a degree -1 map on Y");
    if (map_is_zero(th)) return s;  // empty correction sums: the SDR itself

    ComplexPtr y = s.y;
    ComplexPtr x = s.x;
    int yt = y->trunc;

    /* theta strictly lowers the recorded filtration weight */
    for (int n = 1; n <= th.hi; ++n)
        for (int j = 0; j < y->dim(n); ++j)
            for (int i = 0; i < y->dim(n - 1); ++i)
                if (th.at(n)(i, j) != 0 && s.filt[n - 1][i] >= s.filt[n][j])
                    fail("PerturbationNotLowering",
                         "theta(" + to_string(y->basis[n][j]) + ") hits " +
                             to_string(y->basis[n - 1][i]) + " of weight >= " +
                             std::to_string(s.filt[n][j]));

    /* (d + theta)^2 = 0 */
    std::vector<IntMat> dth(yt + 1);
    for (int n = 0; n <= yt; ++n) {
        dth[n] = (n >= 1) ? y->d[n] : IntMat(y->dim(n - 1), y->dim(n));
        if (n <= th.hi) dth[n] = dth[n] + th.at(n);
    }
    for (int n = 2; n <= yt; ++n)
        if (!(dth[n - 1] * dth[n]).is_zero())
            fail("SquareNotZero", "(d + theta)^2 != 0 entering degree " + std::to_string(n));

    int guard = max_filtration_weight(s) + 2;
    auto run_series = [guard](IntMat acc, IntMat term,
                              const std::function<IntMat(const IntMat&)>& step) {
        for (int it = 0;; ++it) {
            term = step(term);
            if (term.is_zero()) return acc;
            if (it >= guard) throw std::logic_error("perturbation series failed to terminate");
            acc = acc + term;
        }
    };

    /* materialization ranges: the series at degree n read h at n-1 / n */
    int hi_n = std::min(s.nabla.hi, s.h.hi + 1);          // (h theta)^k nabla
    int hi_f = std::min(s.f.hi, s.h.hi);                  // f (theta h)^k
    int hi_h = s.h.hi;                                    // (h theta)^k h
    int hi_d = std::min({x->trunc, s.nabla.hi, s.f.hi + 1, s.h.hi + 1});

    std::vector<IntMat> nab(x->trunc + 1), ff(y->trunc + 1), hh(y->trunc + 1), dx(hi_d + 1);
    auto HT = [&](int n) { return s.h.at(n - 1) * th.at(n); };  // Y_n -> Y_n
    auto TH = [&](int n) { return th.at(n + 1) * s.h.at(n); };  // Y_n -> Y_n
    for (int n = 0; n <= hi_n; ++n)
        nab[n] = n == 0 ? s.nabla.at(0)
                        : run_series(s.nabla.at(n), s.nabla.at(n),
                                     [&](const IntMat& m) { return HT(n) * m; });
    for (int n = 0; n <= hi_f; ++n)
        ff[n] = run_series(s.f.at(n), s.f.at(n), [&](const IntMat& m) { return m * TH(n); });
    for (int n = 0; n <= hi_h; ++n)
        hh[n] = run_series(s.h.at(n), s.h.at(n), [&](const IntMat& m) { return HT(n + 1) * m; });
    for (int n = 0; n <= hi_d; ++n) {
        dx[n] = (n >= 1) ? x->d[n] : IntMat(x->dim(n - 1), x->dim(n));
        if (n == 0) continue;
        IntMat m = th.at(n) * s.nabla.at(n);  // theta nabla : X_n -> Y_{n-1}
        for (int it = 0; !m.is_zero(); ++it) {
            if (it > guard) throw std::logic_error("perturbation series failed to terminate");
            dx[n] = dx[n] + s.f.at(n - 1) * m;
            m = TH(n - 1) * m;
        }
    }

    /* the perturbed complexes (the builder re-checks both squares) */
    ComplexBuilder yb(y->name + " [perturbed]", yt);
    for (int n = 0; n <= yt; ++n)
        for (TermRef t : y->basis[n]) yb.add(t);
    ComplexPtr y2 = yb.finish([&](TermRef t) {
        FormalSum out;
        int n = t->degree, j = y->pos(t);
        for (int i = 0; i < y->dim(n - 1); ++i)
            if (dth[n](i, j) != 0) out.add(y->basis[n - 1][i], dth[n](i, j));
        return out;
    });
    ComplexBuilder xb(x->name + " [perturbed]", hi_d);
    for (int n = 0; n <= hi_d; ++n)
        for (TermRef t : x->basis[n]) xb.add(t);
    ComplexPtr x2 = xb.finish([&](TermRef t) {
        FormalSum out;
        int n = t->degree, j = x->pos(t);
        for (int i = 0; i < x->dim(n - 1); ++i)
            if (dx[n](i, j) != 0) out.add(x->basis[n - 1][i], dx[n](i, j));
        return out;
    });

    auto pack = [](ComplexPtr src, ComplexPtr dst, int deg, int hi, std::vector<IntMat> m) {
        ChainMap r;
        r.src = src;
        r.dst = dst;
        r.deg = deg;
        r.hi = std::min(hi, map_hi(*src, *dst, deg));
        r.m = std::move(m);
        r.m.resize(src->trunc + 1);
        return r;
    };

    SDRData out;
    out.x = x2;
    out.y = y2;
    out.nabla = pack(x2, y2, 0, hi_n, std::move(nab));
    out.f = pack(y2, x2, 0, hi_f, std::move(ff));
    out.h = pack(y2, y2, +1, hi_h, std::move(hh));
    out.filt = s.filt;

    SDRReport rep = verify_sdr(out);
    if (!rep.ok) {
        for (const auto& ln : rep.lines)
            if (!ln.ok)
                throw std::logic_error("perturbed data is not an SDR: " + ln.condition +
                                       " fails at degree " + std::to_string(ln.degree) + " on " +
                                       ln.witness);
    }
    return out;
}

}  // namespace cohoch
