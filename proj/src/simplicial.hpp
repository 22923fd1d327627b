#pragma once

/* Finite simplicial sets, presented by their nondegenerate simplices with
 * explicit face tables; degeneracies are handled symbolically through the
 * Eilenberg-Zilber normal form s_J(x) with J a strictly decreasing index list
 * (equivalently: the set of all i with the simplex in the image of s_i).
 *
 * On top of that: parsing/validation, cartesian products, suspension,
 * simplicial maps, simplicial groups with explicit level tables, twisting
 * functions, twisted cartesian products, and the normalized-chains functor
 * with its Alexander-Whitney coalgebra structure.
 */

#include "algebra.hpp"
#include "errors.hpp"

#include <map>

namespace cohoch {

/* s_J applied to the base_idx-th nondegenerate base_dim-simplex. */
struct Simp {
    std::vector<int> degen;  // strictly decreasing; outermost (largest) first
    int base_dim = 0;
    int base_idx = 0;

    int dim() const { return base_dim + static_cast<int>(degen.size()); }
    bool degenerate() const { return !degen.empty(); }
    bool in_image_of(int i) const;

    bool operator==(const Simp& o) const {
        return base_dim == o.base_dim && base_idx == o.base_idx && degen == o.degen;
    }
    bool operator<(const Simp& o) const {
        if (base_dim != o.base_dim) return base_dim < o.base_dim;
        if (base_idx != o.base_idx) return base_idx < o.base_idx;
        return degen < o.degen;
    }
};

struct SSet {
    std::string name;
    int dim_cap = 12;
    std::vector<std::vector<std::string>> names;       // nondegenerate simplices per dim
    std::vector<std::vector<std::vector<Simp>>> face;  // face[d][i][k] = the k-th face, d >= 1

    int dim_top() const { return static_cast<int>(names.size()) - 1; }
    int count(int d) const {
        return (d < 0 || d > dim_top()) ? 0 : static_cast<int>(names[d].size());
    }
    int id_of(int d, const std::string& nm) const;
    bool reduced() const { return count(0) == 1; }

    Simp face_of(const Simp& x, int i) const;
    static Simp degeneracy_of(const Simp& x, int i);
    std::string str(const Simp& x) const;

    /* all simplices of dimension d (nondegenerate and degenerate), in a fixed
     * deterministic order */
    std::vector<Simp> all_simplices(int d) const;

    /* throws SimplicialIdentityViolation / MalformedDocument */
    void validate() const;
};

SSet parse_simplicial_set(const std::string& json_text, int dim_cap = 12);
SSet load_simplicial_set(const std::string& path, int dim_cap = 12);

/* ------------------------------- standard models ------------------------------- */

/* minimal n-sphere: one vertex, one n-cell, every face fully collapsed */
SSet sphere(int n, const std::string& name = "");
/* the standard n-simplex; nondegenerate simplices are vertex subsets */
SSet standard_simplex(int n);

SSet cartesian_product(const SSet& k, const SSet& l, int dim_cap);

/* Product with its bookkeeping: the component pair (s_A x, s_B y) of every
 * nondegenerate cell, lookup of a same-dimension component pair as a product
 * simplex (stripping the common degeneracy set), and the converse splitting.
 * The Eilenberg-Zilber maps and the perturbation-lemma filtration all work
 * through this structure. */
struct ProductStructure {
    SSet prod;
    std::vector<std::vector<std::pair<Simp, Simp>>> cells;
    std::vector<std::map<std::pair<Simp, Simp>, int>> cell_idx;

    Simp normalize_pair(Simp u, Simp v) const;
    std::pair<Simp, Simp> components(const Simp& p) const;
    /* filtration weight of a nondegenerate cell: dimension of its
     * nondegenerate first component */
    int weight(int d, int idx) const { return cells[d][idx].first.base_dim; }
};

ProductStructure cartesian_product_full(const SSet& k, const SSet& l, int dim_cap);

/* Suspension with exactly one vertex: nondegenerate (n+1)-cells e(x) for the
 * nondegenerate n-cells x (n >= 1) of k, plus a loop e(v) for every
 * non-basepoint vertex v (the basepoint is the first vertex listed). */
SSet simplicial_suspension(const SSet& k);

/* ------------------------------- simplicial maps ------------------------------- */

struct SMap {
    std::vector<std::vector<Simp>> img;  // image of each nondegenerate simplex
};

SMap identity_smap(const SSet& k);
SMap constant_smap(const SSet& k, const SSet& l);  // collapse to l's basepoint
SMap parse_simplicial_map(const SSet& k, const SSet& l, const std::string& json_text);
Simp apply_smap(const SSet& l, const SMap& g, const Simp& x);
void validate_smap(const SSet& k, const SSet& l, const SMap& g);

/* ------------------------------- simplicial groups ------------------------------- */

struct SimplicialGroup {
    SSet s;        // underlying simplicial set
    int level_cap = 0;
    std::vector<std::vector<Simp>> elems;        // all level-n simplices
    std::vector<std::map<Simp, int>> elem_idx;
    std::vector<std::vector<std::vector<int>>> mult;  // [n][i][j]
    std::vector<int> ident;                      // identity index per level

    int el(int n, const Simp& x) const;
    int op(int n, int i, int j) const { return mult[n][i][j]; }
    int inv(int n, int i) const;
    Simp face_el(int n, int i, int k) const;        // face of an element, as a Simp
    int face_idx(int n, int i, int k) const;        // ... resolved at level n-1
    int degeneracy_idx(int n, int i, int k) const;  // s_k, resolved at level n+1
    void validate() const;
};

/* constant simplicial group on a finite group given by its table */
SimplicialGroup constant_group(const std::string& name, const std::vector<std::string>& elems,
                               const std::vector<std::vector<int>>& table, int ident_idx,
                               int level_cap);

struct TwistingFunction {
    std::vector<std::vector<int>> tau;  // [dim 1..][nondeg idx] -> group element at level dim-1
};

/* tau extended to degenerate simplices via tau(s_0 x) = e, tau(s_{i+1} x) = s_i tau(x) */
int tau_of(const SSet& k, const SimplicialGroup& g, const TwistingFunction& t, const Simp& x);

/* throws Error("TwistingAxiomViolation", witness) */
void validate_twisting(const SSet& k, const SimplicialGroup& g, const TwistingFunction& t,
                       int dim_cap);

/* fiber simplices acted on levelwise by group elements */
using FiberAction = std::function<Simp(int level, int g_idx, const Simp& y)>;
FiberAction left_translation(const SimplicialGroup& g);

/* Twisted cartesian product k x_tau f: the 0-th face of (x, y) is
 * (d0 x, tau(x) . d0 y); all other structure is componentwise. */
SSet twisted_cartesian_product(const SSet& k, const SimplicialGroup& g, const TwistingFunction& t,
                               const SSet& f, const FiberAction& act, int dim_cap);

/* ------------------------------- normalized chains ------------------------------- */

/* Normalized chains with the Alexander-Whitney diagonal; basis atoms are named
 * by the nondegenerate simplices. */
CoalgebraPtr normalized_chains(const SSet& k, int trunc);

/* chain map induced by a simplicial map (degenerate images die) */
ChainMap chains_of_smap(const SSet& k, const SSet& l, const SMap& g, CoalgebraPtr ck,
                        CoalgebraPtr cl);

}  // namespace cohoch
