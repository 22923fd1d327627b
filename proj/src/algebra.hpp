#pragma once

/* Chain (co)algebra structures over the free complexes of chain.hpp.
 *
 * Coactions and diagonals are materialized as chain maps into explicit tensor
 * complexes, so every structural axiom is checked by exact matrix identities.
 * Sweedler lists decode those matrices back into term pairs for the
 * constructions that consume comultiplications letter by letter.
 */

#include "chain.hpp"
#include "errors.hpp"

#include <tuple>

namespace cohoch {

using Sweedler = std::vector<std::tuple<TermRef, TermRef, Int>>;

/* Decode a chain map into a tensor complex as Sweedler lists. */
Sweedler sweedler_of(const ChainMap& into_tensor, TermRef t);

struct ChainCoalgebra {
    ComplexPtr c;
    ComplexPtr cc;   // c (x) c
    ChainMap delta;  // c -> cc, degree 0
    TermRef unit = nullptr;  // coaugmentation image (basepoint class) when reduced-like

    Sweedler sweedler(TermRef t) const { return sweedler_of(delta, t); }
    /* terms with either factor of degree 0 removed (reduced diagonal for a
     * connected coalgebra) */
    Sweedler sweedler_reduced(TermRef t) const;
};
using CoalgebraPtr = std::shared_ptr<const ChainCoalgebra>;

struct ChainAlgebra {
    ComplexPtr c;
    TermRef unit = nullptr;
    /* product on basis elements; values lie in the basis span (producers
     * project when a word-length cap quotients the target) */
    std::function<FormalSum(TermRef, TermRef)> mul;
};
using AlgebraPtr = std::shared_ptr<const ChainAlgebra>;

/* Two-sided comodule N over a coalgebra C': coactions as chain maps into
 * materialized tensor complexes. */
struct Bicomodule {
    ComplexPtr n;
    CoalgebraPtr over;
    ComplexPtr cn;  // over->c (x) n
    ComplexPtr nc;  // n (x) over->c
    ChainMap left;   // lambda : n -> cn
    ChainMap right;  // rho    : n -> nc
    TermRef unit = nullptr;  // coaugmentation basis element of n

    Sweedler sweedler_left(TermRef t) const { return sweedler_of(left, t); }
    Sweedler sweedler_right(TermRef t) const { return sweedler_of(right, t); }
};
using BicomodulePtr = std::shared_ptr<const Bicomodule>;

/* Throws Error("NotACoalgebra", witness) unless delta is a chain map that is
 * coassociative and counital (counit = degree-0 augmentation). */
void verify_coalgebra(const ChainCoalgebra& a, int up_to = 1 << 26);

/* Throws Error("NotABicomodule", witness) unless both coactions are chain
 * maps, coassociative over delta, counital, commuting, and compatible with
 * the coaugmentation. */
void verify_bicomodule(const Bicomodule& b, int up_to = 1 << 26);

/* Tensor product coalgebra with the interchange Koszul sign.  When `on` is
 * given it is used as the underlying complex instead of a fresh tensor
 * complex; it must be a tensor complex of a->c and b->c (basis of pair
 * terms), so that maps built elsewhere on the same complex compose. */
CoalgebraPtr tensor_coalgebra(CoalgebraPtr a, CoalgebraPtr b, int trunc = -1,
                              ComplexPtr on = nullptr);

/* The coalgebra seen as a bicomodule over itself (both coactions = delta). */
BicomodulePtr self_bicomodule(CoalgebraPtr a);

/* Bicomodule from per-term coaction rules (verified unless told otherwise). */
BicomodulePtr make_bicomodule(ComplexPtr n, CoalgebraPtr over,
                              const std::function<FormalSum(TermRef)>& left_rule,
                              const std::function<FormalSum(TermRef)>& right_rule, TermRef unit,
                              bool verify = true);

/* Tensor product of bicomodules over the tensor coalgebra, with interchange
 * Koszul signs in both coactions. */
BicomodulePtr tensor_bicomodule(BicomodulePtr x, BicomodulePtr y, CoalgebraPtr over_tensor);

}  // namespace cohoch
