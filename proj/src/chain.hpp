#pragma once

/* Free chain complexes over Z with a distinguished basis, chain maps between
 * them, tensor products, suspension, and integer homology.
 *
 * Truncation contract: a complex carries its data for degrees 0..trunc and is
 * silent above; homology is reported only for degrees <= trunc-1 (computing
 * H_n needs the differential entering from degree n+1).
 */

#include "intmat.hpp"
#include "term.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>

namespace cohoch {

struct FreeChainComplex;
using ComplexPtr = std::shared_ptr<const FreeChainComplex>;

struct FreeChainComplex {
    std::string name;
    int trunc = 0;
    std::vector<std::vector<TermRef>> basis;  // [0..trunc]
    std::unordered_map<TermRef, int> index;   // term -> position within its degree
    std::vector<IntMat> d;                    // d[n] : C_n -> C_{n-1}, sizes dim(n-1) x dim(n)

    int dim(int n) const { return (n < 0 || n > trunc) ? 0 : static_cast<int>(basis[n].size()); }
    bool has(TermRef t) const { return index.count(t) != 0; }
    int pos(TermRef t) const {
        auto it = index.find(t);
        return it == index.end() ? -1 : it->second;
    }

    std::vector<Int> vec(int n, const FormalSum& s) const;
    FormalSum sum(int n, const std::vector<Int>& v) const;
    FormalSum boundary(TermRef t) const;
    FormalSum boundary_sum(int n, const FormalSum& s) const;
};

/* Drop the terms of s that are not basis elements of c (quotient semantics for
 * word-length caps and truncation; use deliberately). */
FormalSum project_to(const FreeChainComplex& c, const FormalSum& s);

class ComplexBuilder {
  public:
    ComplexBuilder(std::string name, int trunc);

    /* Register a basis element (degree read off the term).  Returns false and
     * does nothing when the degree exceeds trunc.  Throws on duplicates. */
    bool add(TermRef t);
    bool has(TermRef t) const { return c_.has(t); }
    const std::vector<std::vector<TermRef>>& basis() const { return c_.basis; }
    int trunc() const { return c_.trunc; }

    /* Materialize the differential matrices from a per-basis-element rule.
     * Every term of diff(t) must be a registered basis element of degree
     * |t| - 1 (use project_to in the rule when quotienting is intended).
     * check_d2 verifies d^2 = 0 exactly and throws on failure. */
    ComplexPtr finish(const std::function<FormalSum(TermRef)>& diff, bool check_d2 = true);

  private:
    FreeChainComplex c_;
    bool done_ = false;
};

/* ------------------------------- chain maps ------------------------------- */

/* Degree-deg graded map src -> dst given by matrices per degree.  m[n] maps
 * C_n(src) to C_{n+deg}(dst); entries are meaningful for n in [0, hi].  A map
 * of degree r is a chain map when d f = (-1)^r f d. */
struct ChainMap {
    ComplexPtr src, dst;
    int deg = 0;
    int hi = -1;
    std::vector<IntMat> m;  // size src->trunc + 1

    const IntMat& at(int n) const { return m[n]; }
    FormalSum apply(TermRef t) const;
    FormalSum apply(int n, const FormalSum& s) const;
};

/* Highest degree at which a degree-deg map src -> dst can be materialized. */
int map_hi(const FreeChainComplex& src, const FreeChainComplex& dst, int deg);

ChainMap make_chain_map(ComplexPtr src, ComplexPtr dst, int deg,
                        const std::function<FormalSum(TermRef)>& f, int hi = -1);
ChainMap identity_map(ComplexPtr c);
ChainMap zero_map(ComplexPtr src, ComplexPtr dst, int deg);
ChainMap differential_map(ComplexPtr c);  // d as a degree -1 chain map

ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f
ChainMap map_add(const ChainMap& a, const ChainMap& b);
ChainMap map_sub(const ChainMap& a, const ChainMap& b);
ChainMap map_neg(const ChainMap& a);
ChainMap map_scale(const Int& k, const ChainMap& a);

bool map_equal(const ChainMap& a, const ChainMap& b, int up_to = 1 << 26);
bool map_is_zero(const ChainMap& a, int up_to = 1 << 26);

struct ChainMapWitness {
    int degree = 0;
    TermRef basis_elt = nullptr;
    FormalSum defect;
};

/* nullopt when f is a chain map (through degree up_to); otherwise the first
 * failing basis element with its defect d f - (-1)^deg f d. */
std::optional<ChainMapWitness> chain_map_defect(const ChainMap& f, int up_to = 1 << 26);

/* First basis element where a and b disagree, if any. */
std::optional<ChainMapWitness> map_difference_witness(const ChainMap& a, const ChainMap& b,
                                                      int up_to = 1 << 26);

/* h : X -> X of degree +1 with d h + h d = g - f (f, g chain maps X -> X). */
struct ChainHomotopy {
    ChainMap f, g, h;
};
std::optional<ChainMapWitness> homotopy_defect(const ChainHomotopy& hh, int up_to = 1 << 26);

/* ------------------------------- constructions ------------------------------- */

/* Tensor product complex; basis at degree n is pair(a, b) with |a| + |b| = n,
 * ordered by |a| ascending then source positions.  d(a (x) b) =
 * da (x) b + (-1)^{|a|} a (x) db.  trunc = min of the factors' by default. */
ComplexPtr tensor_complex(ComplexPtr a, ComplexPtr b, int trunc = -1);

/* (f (x) g) between already-built tensor complexes, with the Koszul sign
 * (-1)^{|g||x|} on x (x) y. */
ChainMap tensor_map(const ChainMap& f, const ChainMap& g, ComplexPtr src_tensor,
                    ComplexPtr dst_tensor);

/* Rebracketing (A (x) B) (x) C -> A (x) (B (x) C); coefficients are all +1. */
ChainMap associator(ComplexPtr left_nested, ComplexPtr right_nested);

/* Suspension: basis s[x] in degree |x|+1, d(s x) = -s(d x), trunc raised by 1. */
ComplexPtr suspend_complex(ComplexPtr c);

/* ------------------------------- homology ------------------------------- */

struct HomologyGroup {
    int degree = 0;
    int betti = 0;
    std::vector<Int> torsion;  // invariant factors > 1, in divisibility order
};

/* Requires n <= trunc - 1 (throws std::out_of_range above that). */
HomologyGroup homology_group(const FreeChainComplex& c, int n);
std::vector<HomologyGroup> homology_table(const FreeChainComplex& c, int up_to);

/* Homology with generators: a cycle basis, the presentation of H_n as a
 * quotient, explicit generating cycles, and reduction of arbitrary cycles to
 * coordinates (torsion coordinates first, each reduced mod its divisor, then
 * free coordinates). */
struct HomologyBasis {
    int n = 0;
    int betti = 0;
    std::vector<Int> torsion;
    IntMat cycles;        // dim(C_n) x z, columns a basis of ker d_n
    SmithForm cycle_snf;  // of cycles, for membership/coordinates
    IntMat p;             // z x z unimodular: quotient coordinates = p * (cycle coords)
    IntMat pinv;
    int num_rel = 0;            // rank of the boundary relation matrix
    std::vector<Int> rel_div;   // its invariant factors d_1..d_rank
    std::vector<int> gen_rows;  // quotient-coordinate row of each generator (torsion gens, then free)

    int num_gens() const { return static_cast<int>(gen_rows.size()); }
    /* order of generator i: 0 for free, else its divisor (> 1) */
    Int gen_order(int i) const;
    /* generating cycle i as a chain vector in C_n */
    std::vector<Int> generator(int i) const;
    /* coordinates of a cycle in the generator basis; throws if v is not a cycle */
    std::vector<Int> reduce(const std::vector<Int>& v) const;
};

HomologyBasis homology_basis(const FreeChainComplex& c, int n);

struct InducedMap {
    int degree = 0;  // source homology degree
    IntMat matrix;   // dst gens x src gens
    std::vector<Int> src_orders, dst_orders;
    bool surjective = false;
    bool isomorphism = false;
};

/* Matrix of H_n(f) in the generator bases, with the isomorphism flag
 * (isomorphic abstract groups + surjectivity suffices over Z: finitely
 * generated abelian groups are Hopfian). */
InducedMap induced_map_on_homology(const ChainMap& f, int n);

}  // namespace cohoch
