#pragma once

/* The central differential constructions: cobar, bar, Hochschild and
 * coHochschild complexes, the bar-cobar adjunction unit, the two-sided cobar
 * oracle, and the norm operator.
 *
 * Word-length caps implement quotient (cobar-side) / subcomplex (bar-side)
 * semantics so that merely connected inputs (degree-0 letters) stay finite;
 * capped_validity reports through which degree homology is certified.
 */

#include "algebra.hpp"

namespace cohoch {

/* ------------------------- bimodules over chain algebras ------------------------- */

struct Bimodule {
    ComplexPtr m;
    AlgebraPtr over;
    std::function<FormalSum(TermRef, TermRef)> left;   // a . x
    std::function<FormalSum(TermRef, TermRef)> right;  // x . a
    TermRef unit = nullptr;
};
using BimodulePtr = std::shared_ptr<const Bimodule>;

/* Throws Error("NotABimodule", witness): actions must be chain maps,
 * associative, unital, and commuting (a.x).b = a.(x.b).  Triples whose total
 * degree exceeds the truncation are skipped (quotient semantics). */
void verify_bimodule(const Bimodule& b, int up_to = 1 << 26);

BimodulePtr self_bimodule(AlgebraPtr a);
BimodulePtr trivial_bimodule(AlgebraPtr a);  // M = Z with trivial actions
BimodulePtr make_bimodule(ComplexPtr m, AlgebraPtr over,
                          const std::function<FormalSum(TermRef, TermRef)>& left,
                          const std::function<FormalSum(TermRef, TermRef)>& right, TermRef unit,
                          bool verify = true);

/* ------------------------- bicomodule constructors ------------------------- */

BicomodulePtr trivial_bicomodule(CoalgebraPtr c);       // N = Z, both coactions trivial
BicomodulePtr trivial_left_bicomodule(CoalgebraPtr c);  // N = C, left trivial, right = Delta
/* N = C (x) C with left coaction Delta (x) Id and right coaction Id (x) Delta */
BicomodulePtr square_bicomodule(CoalgebraPtr c);
/* Chains of the source as a bicomodule over the target along two coalgebra
 * maps: left = (g (x) 1) Delta, right = (1 (x) h) Delta. */
BicomodulePtr maps_bicomodule(CoalgebraPtr ck, CoalgebraPtr cl, const ChainMap& g,
                              const ChainMap& h);

/* ------------------------- cobar and bar ------------------------- */

/* Cobar construction T(s^{-1} Cbar) with the concatenation product.
 * Errors: NotConnected when dim C_0 != 1; InfiniteLevel when Cbar has
 * degree-1 classes (degree-0 letters) and word_cap < 0. */
AlgebraPtr cobar(CoalgebraPtr c, int trunc, int word_cap = -1);

/* Bar construction T(s Abar) with the splitting comultiplication.
 * Errors: NotConnected when dim A_0 != 1 or the unit is missing. */
CoalgebraPtr bar(AlgebraPtr a, int trunc, int word_cap = -1);

/* Largest degree through which homology of a word-capped construction over
 * Cbar letters is certified: trunc-1 when uncapped, else also bounded by
 * cap * max(min letter degree, 1) - 1. */
int capped_validity(CoalgebraPtr c, int trunc, int word_cap);

/* ------------------------- Hochschild ------------------------- */

struct Hochschild {
    ComplexPtr complex;  // T(s Abar) (x) M
    AlgebraPtr alg;
    BimodulePtr coef;
    CoalgebraPtr bar_coalg;
    ChainMap incl_coef;  // M -> complex, x |-> [] (x) x
    ChainMap proj_bar;   // complex -> bar(A), w (x) x |-> eps(x) w
};

Hochschild hochschild(AlgebraPtr a, BimodulePtr m, int trunc, int word_cap = -1,
                      bool verify = true);

/* ------------------------- coHochschild ------------------------- */

struct CoHochschild {
    ComplexPtr complex;  // N (x) T(s^{-1} Cbar)
    BicomodulePtr coef;
    CoalgebraPtr over;
    AlgebraPtr omega;  // the cobar construction this extends
    int word_cap = -1;
    int valid_up_to = -1;
    ChainMap incl_cobar;  // Omega C -> complex, w |-> unit (x) w
    ChainMap proj_coef;   // complex -> N, x (x) [] |-> x
};

/* Errors: NotABicomodule (structure verification), NotConnected,
 * InfiniteLevel (degree-0 letters, no cap). */
CoHochschild cohochschild(BicomodulePtr n, int trunc, int word_cap = -1, bool verify = true);

/* ------------------------- bar-cobar unit ------------------------- */

struct BarCobarUnit {
    AlgebraPtr omega;
    CoalgebraPtr barcobar;
    ChainMap eta;  // C -> bar(cobar(C))
};

BarCobarUnit bar_cobar_unit(CoalgebraPtr c, int trunc);

/* ------------------------- two-sided cobar oracle ------------------------- */

/* C (x) Omega C (x) C with both twists; quasi-isomorphic to C.  Built with an
 * independent differential as an oracle for cohochschild(square_bicomodule). */
struct TwoSidedCobar {
    ComplexPtr complex;  // basis pair(pair(x, w), y)
    AlgebraPtr omega;
};
TwoSidedCobar two_sided_cobar(CoalgebraPtr c, int trunc, int word_cap = -1);

/* The isomorphism HH(C (x) C, C) -> two-sided cobar,
 * (x (x) x') (x) w  |->  (-1)^{|x|(|x'|+|w|)} x' (x) w (x) x.
 * The right coaction factor of C (x) C prepends letters, so it must land on
 * the left cobar coefficient; the left coaction factor appends and lands on
 * the right.  The sign is the Koszul cost of carrying x across x' and w. */
ChainMap cohoch_to_two_sided(const CoHochschild& hh, const TwoSidedCobar& ts);

/* ------------------------- norm operator ------------------------- */

/* Signed sum of the cyclic permutations of a word: Koszul sign times the sign
 * of the permutation. */
FormalSum norm_operator(TermRef word);

}  // namespace cohoch
