#include "chain.hpp"

#include "koszul.hpp"

#include <algorithm>
#include <stdexcept>

namespace cohoch {

/* ------------------------------- complex basics ------------------------------- */

std::vector<Int> FreeChainComplex::vec(int n, const FormalSum& s) const {
    std::vector<Int> v(dim(n));
    for (const auto& [t, k] : s.c) {
        if (t->degree != n) throw std::logic_error("vec: inhomogeneous sum at " + to_string(t));
        int i = pos(t);
        if (i < 0) throw std::logic_error("vec: term not in basis of " + name + ": " + to_string(t));
        v[i] = k;
    }
    return v;
}

FormalSum FreeChainComplex::sum(int n, const std::vector<Int>& v) const {
    if (static_cast<int>(v.size()) != dim(n)) throw std::logic_error("sum: size mismatch");
    FormalSum s;
    for (int i = 0; i < dim(n); ++i) s.add(basis[n][i], v[i]);
    return s;
}

FormalSum FreeChainComplex::boundary(TermRef t) const {
    int n = t->degree;
    int i = pos(t);
    if (i < 0) throw std::logic_error("boundary: term not in basis: " + to_string(t));
    FormalSum s;
    if (n >= 1)
        for (int r = 0; r < d[n].rows; ++r) s.add(basis[n - 1][r], d[n](r, i));
    return s;
}

FormalSum FreeChainComplex::boundary_sum(int n, const FormalSum& s) const {
    if (n < 1) return {};
    return sum(n - 1, d[n] * vec(n, s));
}

FormalSum project_to(const FreeChainComplex& c, const FormalSum& s) {
    FormalSum r;
    for (const auto& [t, k] : s.c)
        if (c.has(t)) r.add(t, k);
    return r;
}

ComplexBuilder::ComplexBuilder(std::string name, int trunc) {
    if (trunc < 0) throw std::invalid_argument("ComplexBuilder: negative truncation");
    c_.name = std::move(name);
    c_.trunc = trunc;
    c_.basis.resize(trunc + 1);
}

bool ComplexBuilder::add(TermRef t) {
    if (t->degree < 0) throw std::logic_error("ComplexBuilder: negative degree term " + to_string(t));
    if (t->degree > c_.trunc) return false;
    if (c_.has(t)) throw std::logic_error("ComplexBuilder: duplicate basis element " + to_string(t));
    c_.index.emplace(t, static_cast<int>(c_.basis[t->degree].size()));
    c_.basis[t->degree].push_back(t);
    return true;
}

ComplexPtr ComplexBuilder::finish(const std::function<FormalSum(TermRef)>& diff, bool check_d2) {
    if (done_) throw std::logic_error("ComplexBuilder: finish called twice");
    done_ = true;
    c_.d.resize(c_.trunc + 1);
    c_.d[0] = IntMat(0, c_.dim(0));
    for (int n = 1; n <= c_.trunc; ++n) {
        IntMat m(c_.dim(n - 1), c_.dim(n));
        for (int j = 0; j < c_.dim(n); ++j) {
            FormalSum s = diff(c_.basis[n][j]);
            for (const auto& [u, k] : s.c) {
                if (u->degree != n - 1)
                    throw std::logic_error("differential not of degree -1 at " + to_string(c_.basis[n][j]));
                int i = c_.pos(u);
                if (i < 0)
                    throw std::logic_error("differential of " + to_string(c_.basis[n][j]) +
                                           " leaves the basis: " + to_string(u));
                m(i, j) = k;
            }
        }
        c_.d[n] = std::move(m);
    }
    if (check_d2)
        for (int n = 2; n <= c_.trunc; ++n)
            if (!(c_.d[n - 1] * c_.d[n]).is_zero())
                throw std::logic_error("d^2 != 0 in " + c_.name + " at degree " + std::to_string(n));
    return std::make_shared<FreeChainComplex>(std::move(c_));
}

/* ------------------------------- chain maps ------------------------------- */

namespace {

// d[n] with graceful shapes outside [1, trunc]
IntMat d_at(const FreeChainComplex& c, int n) {
    if (n >= 1 && n <= c.trunc) return c.d[n];
    return IntMat(c.dim(n - 1), c.dim(n));
}

bool same_complex(const ComplexPtr& a, const ComplexPtr& b) {
    return a.get() == b.get() || (a->basis == b->basis && a->d == b->d);
}

void require_same(const ComplexPtr& a, const ComplexPtr& b, const char* what) {
    if (!same_complex(a, b)) throw std::invalid_argument(std::string("complex mismatch: ") + what);
}

}  // namespace

int map_hi(const FreeChainComplex& src, const FreeChainComplex& dst, int deg) {
    return std::min(src.trunc, dst.trunc - deg);
}

FormalSum ChainMap::apply(TermRef t) const {
    int n = t->degree;
    if (n < 0 || n > hi) throw std::out_of_range("ChainMap::apply: degree outside valid range");
    int j = src->pos(t);
    if (j < 0) throw std::logic_error("ChainMap::apply: term not in source basis: " + to_string(t));
    FormalSum s;
    const IntMat& mm = m[n];
    for (int i = 0; i < mm.rows; ++i) s.add(dst->basis[n + deg][i], mm(i, j));
    return s;
}

FormalSum ChainMap::apply(int n, const FormalSum& s) const {
    if (s.zero()) return {};
    if (n < 0 || n > hi) throw std::out_of_range("ChainMap::apply: degree outside valid range");
    if (n + deg < 0) return {};
    return dst->sum(n + deg, m[n] * src->vec(n, s));
}

ChainMap make_chain_map(ComplexPtr src, ComplexPtr dst, int deg,
                        const std::function<FormalSum(TermRef)>& f, int hi) {
    ChainMap r;
    r.src = src;
    r.dst = dst;
    r.deg = deg;
    r.hi = map_hi(*src, *dst, deg);
    if (hi >= 0) r.hi = std::min(r.hi, hi);
    r.m.resize(src->trunc + 1);
    for (int n = 0; n <= r.hi; ++n) {
        IntMat mm(dst->dim(n + deg), src->dim(n));
        for (int j = 0; j < src->dim(n); ++j) {
            FormalSum s = f(src->basis[n][j]);
            for (const auto& [u, k] : s.c) {
                if (u->degree != n + deg)
                    throw std::logic_error("map image not homogeneous of the right degree at " +
                                           to_string(src->basis[n][j]));
                int i = dst->pos(u);
                if (i < 0)
                    throw std::logic_error("map image of " + to_string(src->basis[n][j]) +
                                           " not in target basis: " + to_string(u));
                mm(i, j) = k;
            }
        }
        r.m[n] = std::move(mm);
    }
    return r;
}

ChainMap identity_map(ComplexPtr c) {
    ChainMap r;
    r.src = r.dst = c;
    r.deg = 0;
    r.hi = c->trunc;
    r.m.resize(c->trunc + 1);
    for (int n = 0; n <= c->trunc; ++n) r.m[n] = IntMat::identity(c->dim(n));
    return r;
}

ChainMap zero_map(ComplexPtr src, ComplexPtr dst, int deg) {
    ChainMap r;
    r.src = src;
    r.dst = dst;
    r.deg = deg;
    r.hi = map_hi(*src, *dst, deg);
    r.m.resize(src->trunc + 1);
    for (int n = 0; n <= r.hi; ++n) r.m[n] = IntMat(dst->dim(n + deg), src->dim(n));
    return r;
}

ChainMap differential_map(ComplexPtr c) {
    ChainMap r;
    r.src = r.dst = c;
    r.deg = -1;
    r.hi = c->trunc;
    r.m.resize(c->trunc + 1);
    for (int n = 0; n <= c->trunc; ++n) r.m[n] = d_at(*c, n);
    return r;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    require_same(f.dst, g.src, "compose");
    ChainMap r;
    r.src = f.src;
    r.dst = g.dst;
    r.deg = f.deg + g.deg;
    r.hi = std::min(f.hi, g.hi - f.deg);
    r.m.resize(f.src->trunc + 1);
    for (int n = 0; n <= r.hi; ++n) {
        if (n + f.deg < 0)
            r.m[n] = IntMat(g.dst->dim(n + r.deg), f.src->dim(n));
        else
            r.m[n] = g.m[n + f.deg] * f.m[n];
    }
    return r;
}

namespace {

ChainMap combine(const ChainMap& a, const ChainMap& b, int bsign) {
    require_same(a.src, b.src, "combine src");
    require_same(a.dst, b.dst, "combine dst");
    if (a.deg != b.deg) throw std::invalid_argument("combine: degree mismatch");
    ChainMap r = a;
    r.hi = std::min(a.hi, b.hi);
    for (int n = 0; n <= r.hi; ++n) r.m[n] = (bsign > 0) ? a.m[n] + b.m[n] : a.m[n] - b.m[n];
    for (int n = r.hi + 1; n < static_cast<int>(r.m.size()); ++n) r.m[n] = IntMat();
    return r;
}

}  // namespace

ChainMap map_add(const ChainMap& a, const ChainMap& b) { return combine(a, b, +1); }
ChainMap map_sub(const ChainMap& a, const ChainMap& b) { return combine(a, b, -1); }

ChainMap map_neg(const ChainMap& a) { return map_scale(Int(-1), a); }

ChainMap map_scale(const Int& k, const ChainMap& a) {
    ChainMap r = a;
    for (int n = 0; n <= r.hi; ++n)
        for (Int& v : r.m[n].a) v *= k;
    return r;
}

bool map_equal(const ChainMap& a, const ChainMap& b, int up_to) {
    return !map_difference_witness(a, b, up_to).has_value();
}

std::optional<ChainMapWitness> map_difference_witness(const ChainMap& a, const ChainMap& b,
                                                      int up_to) {
    require_same(a.src, b.src, "map compare src");
    require_same(a.dst, b.dst, "map compare dst");
    if (a.deg != b.deg) throw std::invalid_argument("map compare: degree mismatch");
    int n_hi = std::min({a.hi, b.hi, up_to});
    for (int n = 0; n <= n_hi; ++n) {
        if (a.m[n] == b.m[n]) continue;
        for (int j = 0; j < a.m[n].cols; ++j)
            for (int i = 0; i < a.m[n].rows; ++i)
                if (a.m[n](i, j) != b.m[n](i, j)) {
                    FormalSum defect;
                    for (int r = 0; r < a.m[n].rows; ++r)
                        defect.add(a.dst->basis[n + a.deg][r], a.m[n](r, j) - b.m[n](r, j));
                    return ChainMapWitness{n, a.src->basis[n][j], defect};
                }
    }
    return std::nullopt;
}

bool map_is_zero(const ChainMap& a, int up_to) {
    int n_hi = std::min(a.hi, up_to);
    for (int n = 0; n <= n_hi; ++n)
        if (!a.m[n].is_zero()) return false;
    return true;
}

std::optional<ChainMapWitness> chain_map_defect(const ChainMap& f, int up_to) {
    int sign = parity_sign(f.deg);
    int n_hi = std::min(f.hi, up_to);
    for (int n = 0; n <= n_hi; ++n) {
        if (n + f.deg > f.dst->trunc) break;
        IntMat lhs = (n + f.deg >= 1) ? d_at(*f.dst, n + f.deg) * f.m[n]
                                      : IntMat(f.dst->dim(n + f.deg - 1), f.src->dim(n));
        IntMat rhs = (n >= 1) ? f.m[n - 1] * d_at(*f.src, n)
                              : IntMat(f.dst->dim(n + f.deg - 1), f.src->dim(n));
        IntMat defect = (sign > 0) ? lhs - rhs : lhs + rhs;
        if (defect.is_zero()) continue;
        for (int j = 0; j < defect.cols; ++j)
            for (int i = 0; i < defect.rows; ++i)
                if (defect(i, j) != 0) {
                    FormalSum ds;
                    for (int r = 0; r < defect.rows; ++r)
                        ds.add(f.dst->basis[n + f.deg - 1][r], defect(r, j));
                    return ChainMapWitness{n, f.src->basis[n][j], ds};
                }
    }
    return std::nullopt;
}

std::optional<ChainMapWitness> homotopy_defect(const ChainHomotopy& hh, int up_to) {
    const ChainMap& h = hh.h;
    if (h.deg != 1 || hh.f.deg != 0 || hh.g.deg != 0)
        throw std::invalid_argument("homotopy_defect: degree conventions are h:+1, f,g:0");
    require_same(h.src, h.dst, "homotopy endo");
    require_same(h.src, hh.f.src, "homotopy f");
    require_same(h.src, hh.g.src, "homotopy g");
    const FreeChainComplex& x = *h.src;
    int n_hi = std::min({h.hi, hh.f.hi, hh.g.hi, up_to});
    for (int n = 0; n <= n_hi; ++n) {
        IntMat dh = d_at(x, n + 1) * h.m[n];
        IntMat hd = (n >= 1) ? h.m[n - 1] * d_at(x, n) : IntMat(x.dim(n), x.dim(n));
        IntMat defect = dh + hd - (hh.g.m[n] - hh.f.m[n]);
        if (defect.is_zero()) continue;
        for (int j = 0; j < defect.cols; ++j)
            for (int i = 0; i < defect.rows; ++i)
                if (defect(i, j) != 0) {
                    FormalSum ds;
                    for (int r = 0; r < defect.rows; ++r) ds.add(x.basis[n][r], defect(r, j));
                    return ChainMapWitness{n, x.basis[n][j], ds};
                }
    }
    return std::nullopt;
}

/* ------------------------------- tensor, suspension ------------------------------- */

ComplexPtr tensor_complex(ComplexPtr a, ComplexPtr b, int trunc) {
    int t = std::min(a->trunc, b->trunc);
    if (trunc >= 0) t = std::min(t, trunc);
    ComplexBuilder bld("(" + a->name + "&" + b->name + ")", t);
    for (int n = 0; n <= t; ++n)
        for (int p = 0; p <= n; ++p)
            for (TermRef x : a->basis[p])
                for (TermRef y : b->basis[n - p]) bld.add(pair_term(x, y));
    auto diff = [&](TermRef t_) {
        TermRef x = t_->left, y = t_->right;
        FormalSum s;
        for (const auto& [u, k] : a->boundary(x).c) s.add(pair_term(u, y), k);
        int sg = parity_sign(x->degree);
        for (const auto& [u, k] : b->boundary(y).c) s.add(pair_term(x, u), sg * k);
        return s;
    };
    return bld.finish(diff, false);  // factors are checked; d^2 = 0 follows
}

ChainMap tensor_map(const ChainMap& f, const ChainMap& g, ComplexPtr src_tensor,
                    ComplexPtr dst_tensor) {
    auto rule = [&](TermRef t) {
        TermRef x = t->left, y = t->right;
        FormalSum fx = f.apply(x);
        FormalSum gy = g.apply(y);
        int sg = pass_sign(g.deg, x->degree);
        FormalSum s;
        for (const auto& [u, ku] : fx.c)
            for (const auto& [v, kv] : gy.c) s.add(pair_term(u, v), sg * ku * kv);
        return s;
    };
    int hi = std::min({map_hi(*src_tensor, *dst_tensor, f.deg + g.deg), f.hi, g.hi});
    return make_chain_map(src_tensor, dst_tensor, f.deg + g.deg, rule, hi);
}

ChainMap associator(ComplexPtr left_nested, ComplexPtr right_nested) {
    auto rule = [](TermRef t) {
        TermRef ab = t->left, c = t->right;
        return FormalSum(pair_term(ab->left, pair_term(ab->right, c)));
    };
    return make_chain_map(left_nested, right_nested, 0, rule);
}

ComplexPtr suspend_complex(ComplexPtr c) {
    ComplexBuilder bld("s(" + c->name + ")", c->trunc + 1);
    for (int n = 0; n <= c->trunc; ++n)
        for (TermRef t : c->basis[n]) bld.add(shift_term(t, +1));
    auto diff = [&](TermRef t) {
        FormalSum s;
        for (const auto& [u, k] : c->boundary(t->child).c) s.add(shift_term(u, +1), -k);
        return s;
    };
    return bld.finish(diff, false);
}

/* ------------------------------- homology ------------------------------- */

HomologyGroup homology_group(const FreeChainComplex& c, int n) {
    if (n < 0 || n > c.trunc - 1)
        throw std::out_of_range("homology_group: H_" + std::to_string(n) + " of " + c.name +
                                " is outside the validity range (trunc " + std::to_string(c.trunc) + ")");
    SmithForm out = smith_normal_form(d_at(c, n));
    SmithForm in = smith_normal_form(d_at(c, n + 1));
    HomologyGroup h;
    h.degree = n;
    h.betti = c.dim(n) - out.rank - in.rank;
    for (const Int& e : in.divisors)
        if (e > 1) h.torsion.push_back(e);
    return h;
}

std::vector<HomologyGroup> homology_table(const FreeChainComplex& c, int up_to) {
    std::vector<HomologyGroup> t;
    for (int n = 0; n <= up_to; ++n) t.push_back(homology_group(c, n));
    return t;
}

HomologyBasis homology_basis(const FreeChainComplex& c, int n) {
    if (n < 0 || n > c.trunc - 1)
        throw std::out_of_range("homology_basis: degree outside the validity range");
    HomologyBasis h;
    h.n = n;
    h.cycles = kernel_basis(smith_normal_form(d_at(c, n)));
    h.cycle_snf = smith_normal_form(h.cycles);
    auto rel = solve(h.cycle_snf, d_at(c, n + 1));
    if (!rel) throw std::logic_error("homology_basis: boundaries are not cycles (d^2 != 0?)");
    SmithForm rs = smith_normal_form(*rel);
    h.p = rs.u;
    h.pinv = rs.uinv;
    h.num_rel = rs.rank;
    h.rel_div = rs.divisors;
    int z = h.cycles.cols;
    h.betti = z - rs.rank;
    for (int i = 0; i < rs.rank; ++i)
        if (rs.divisors[i] > 1) {
            h.torsion.push_back(rs.divisors[i]);
            h.gen_rows.push_back(i);
        }
    for (int i = rs.rank; i < z; ++i) h.gen_rows.push_back(i);
    return h;
}

Int HomologyBasis::gen_order(int i) const {
    return i < static_cast<int>(torsion.size()) ? torsion[i] : Int(0);
}

std::vector<Int> HomologyBasis::generator(int i) const {
    int r = gen_rows[i];
    std::vector<Int> e(pinv.cols);
    std::vector<Int> a(pinv.rows);
    for (int k = 0; k < pinv.rows; ++k) a[k] = pinv(k, r);
    return cycles * a;
}

std::vector<Int> HomologyBasis::reduce(const std::vector<Int>& v) const {
    auto a = solve(cycle_snf, v);
    if (!a) throw std::invalid_argument("HomologyBasis::reduce: vector is not a cycle");
    std::vector<Int> y = p * *a;
    std::vector<Int> out;
    out.reserve(gen_rows.size());
    for (size_t i = 0; i < gen_rows.size(); ++i) {
        Int val = y[gen_rows[i]];
        Int ord = gen_order(static_cast<int>(i));
        if (ord > 1) val = ((val % ord) + ord) % ord;
        out.push_back(val);
    }
    return out;
}

InducedMap induced_map_on_homology(const ChainMap& f, int n) {
    if (n > f.hi) throw std::out_of_range("induced_map_on_homology: beyond the map's valid range");
    HomologyBasis src_h = homology_basis(*f.src, n);
    HomologyBasis dst_h = homology_basis(*f.dst, n + f.deg);
    InducedMap im;
    im.degree = n;
    im.matrix = IntMat(dst_h.num_gens(), src_h.num_gens());
    for (int j = 0; j < src_h.num_gens(); ++j) {
        std::vector<Int> w = f.m[n] * src_h.generator(j);
        std::vector<Int> coords = dst_h.reduce(w);
        for (int i = 0; i < dst_h.num_gens(); ++i) im.matrix(i, j) = coords[i];
    }
    for (int i = 0; i < src_h.num_gens(); ++i) im.src_orders.push_back(src_h.gen_order(i));
    for (int i = 0; i < dst_h.num_gens(); ++i) im.dst_orders.push_back(dst_h.gen_order(i));

    // surjectivity: the cokernel of [matrix | torsion relations] must vanish
    int nt = static_cast<int>(dst_h.torsion.size());
    IntMat rel(dst_h.num_gens(), nt);
    for (int i = 0; i < nt; ++i) rel(i, i) = dst_h.torsion[i];
    SmithForm s = smith_normal_form(hcat(im.matrix, rel));
    im.surjective = (s.rank == dst_h.num_gens());
    for (const Int& e : s.divisors)
        if (e != 1) im.surjective = false;
    // surjection between abstractly isomorphic f.g. abelian groups is an iso
    im.isomorphism = im.surjective && src_h.betti == dst_h.betti && src_h.torsion == dst_h.torsion;
    return im;
}

}  // namespace cohoch
