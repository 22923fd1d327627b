#pragma once

/* The comultiplicative layer on coHochschild complexes.
 *
 * Ingredients, all materialized as exact integer chain maps:
 *
 *   - Milgram's equivalence  q : Omega(C (x) C') -> Omega C (x) Omega C',
 *     splitting a word into its left- and right-factor letters, and its
 *     coHochschild extension  qhat  with the include-then-multiply section
 *     sigma-hat (a section of graded modules with qhat sigma-hat = Id; the
 *     chain-level content of the equivalence is carried by qhat).
 *
 *   - The extension of a DCSH family omega : C -> D to a chain map
 *     omega-hat : HH(C) -> HH(D) by cyclic redistribution of the family
 *     letters around the image of the word part, and its twisted variant
 *     where the redistributed letters pass through a pair of coalgebra maps
 *     (the relative / homotopy-coincidence structure).
 *
 *   - The loop comultiplication psi = q Omega(omega) on the cobar
 *     construction and psi-hat = qhat omega-hat on the full coHochschild
 *     complex, with the ladder checks tying the two together and to the
 *     coefficient diagonal.
 *
 *   - Wedges (Id /\ omega) and (omega /\ Id), composition of families, and
 *     the strict / quasistrict / weak grading of an Alexander-Whitney
 *     coalgebra, certified either by exact family equality or by a
 *     derivation homotopy found degreewise by integer linear solving.
 *
 *   - Homology comultiplication tables over the Kunneth cross basis, in
 *     SNF-adapted generator bases with the change of basis recorded.
 *
 *   - Closed formulas on simplicial suspensions (the letter rule for psi and
 *     the four-term formula for psi-hat), used as independent oracles
 *     against the transfer pipeline, including the relative variant with
 *     letters passing through the chains of the two simplicial maps.
 */

#include "dcsh.hpp"
#include "simplicial.hpp"

namespace cohoch {

/* ------------------------- capped tensor complexes ------------------------- */

/* Tensor of two complexes whose basis terms carry a word-length measure,
 * restricted to total length <= cap.  Every differential in this library is
 * nondecreasing in word length, so the dropped span is d-stable and the
 * result is a quotient complex.  cap < 0 keeps everything. */
ComplexPtr total_capped_tensor(ComplexPtr a, ComplexPtr b, int trunc, int cap,
                               const std::function<int(TermRef)>& length);

/* length measures for the two standard cases */
int word_length(TermRef t);        // a word term: its letter count
int cohoch_word_length(TermRef t); // pair(x, w): letter count of w

/* ------------------------- Milgram q ------------------------- */

/* q on prebuilt complexes.  src spans words over letters s^{-1}(c (x) c');
 * a letter with both factors of positive degree annihilates the word, the
 * others feed the left or right output word.  Moving a left-factor letter
 * into place costs the Koszul sign of its passage over the right word
 * collected so far.  Values are projected into dst (so a total-length cap on
 * the target is respected; q preserves total letter count). */
ChainMap milgram_q_map(ComplexPtr src, ComplexPtr dst, int hi = -1);

struct MilgramQ {
    CoalgebraPtr c, cp;
    CoalgebraPtr pair_coalgebra;  // C (x) C'
    AlgebraPtr omega_pair;        // Omega(C (x) C')
    AlgebraPtr omega_c, omega_cp;
    ComplexPtr target;  // Omega C (x) Omega C', total-length capped when capped
    ChainMap q;
    int word_cap = -1;
    int valid_up_to = -1;
};

/* Errors: NotConnected, InfiniteLevel (from the cobar constructions);
 * NotAChainMap should the certification of q itself ever fail. */
MilgramQ milgram_q(CoalgebraPtr c, CoalgebraPtr cp, int trunc, int word_cap = -1);

/* ------------------------- Milgram qhat ------------------------- */

/* qhat on prebuilt complexes: src the coHochschild complex of a tensor
 * bicomodule (terms (x (x) x') (x) w), dst a tensor of the factor
 * coHochschild complexes.  The word is split by q and the module-extension
 * sign (-1)^{|x'| |U|} moves the left word U past x'. */
ChainMap milgram_qhat_map(ComplexPtr src, ComplexPtr dst);

/* The include-then-multiply section ((x (x) U) (x) (x' (x) V) |->
 * (-1)^{|U||x'|} (x (x) x') (x) iota(U) iota'(V)), where iota pairs a letter
 * with unit_right and iota' pairs unit_left with a letter.  A section of
 * graded modules with qhat sigma-hat = Id; NOT a chain map in general: the
 * coaction letters of the first factor would have to land between the two
 * included blocks. */
ChainMap milgram_sigma_map(ComplexPtr src_tensor, ComplexPtr dst, TermRef unit_left,
                           TermRef unit_right);

struct MilgramQHat {
    BicomodulePtr n, np;
    CoalgebraPtr pair_coalgebra;  // C (x) C'
    CoHochschild big;             // HH(N (x) N', C (x) C')
    CoHochschild left, right;     // HH(N, C), HH(N', C')
    ComplexPtr target;            // left.complex (x) right.complex
    ChainMap qhat;
    ChainMap sigma_hat;
    int word_cap = -1;
    int valid_up_to = -1;
};

/* verify re-checks the chain-map property of qhat and qhat sigma-hat = Id
 * (NotAChainMap on failure).  Errors from the underlying constructions:
 * NotABicomodule, NotConnected, InfiniteLevel. */
MilgramQHat milgram_qhat(BicomodulePtr n, BicomodulePtr np, int trunc, int word_cap = -1,
                         bool verify = true);

/* ------------------------- coHochschild extension ------------------------- */

/* Extend a DCSH family omega : C -> D to omega-hat : HH(C) -> HH(D) between
 * the coHochschild complexes of the self-bicomodules,
 *
 *   omega-hat(x (x) w) = sum over k, over words l_1|..|l_k of F_k(x), over i:
 *     (-1)^{a (b + |W|)} unshift(l_i) (x) l_{i+1}|..|l_k . W . l_1|..|l_{i-1}
 *
 * summed over the words W of omega(w) (the cochain applied letterwise as an
 * algebra map), where a = |l_1..l_{i-1}| and b = |l_i..l_k| in desuspended
 * degrees.  The coaugmented slot goes to (unit (x) omega(w)).  Values are
 * projected into dst (cap quotients).  Throws Error("IncoherentFamily") when
 * the family tables do not cover the needed letters, or (with check) when
 * the result fails the chain-map test; the witness is cited. */
ChainMap cohoch_extend(const DCSHFamily& om, const CoHochschild& src, const CoHochschild& dst,
                       bool check = true);

/* The twisted variant behind the relative comultiplication: the slot family
 * om_slot is applied to the coefficient x, the word part goes through
 * om_word, and the redistributed letters pass through into_pre (the block
 * prepended to the word image) or into_post (the appended block), both
 * degree-0 chain maps between the coalgebra complexes underlying om_slot's
 * target and om_word's target. */
ChainMap cohoch_extend_twisted(const DCSHFamily& om_slot, const DCSHFamily& om_word,
                               const ChainMap& into_pre, const ChainMap& into_post,
                               const CoHochschild& src, const CoHochschild& dst,
                               bool check = true);

/* Cochain-level naturality square  F'_k(f e) = (f (x) f)^{(x) k} F_k(e)
 * (letterwise, signless: every map has degree 0).  Returns the first
 * offending source letter, or nullopt when the squares commute exactly. */
struct NaturalityWitness {
    TermRef letter = nullptr;
    int k = 0;
    FormalSum difference;
};
std::optional<NaturalityWitness> dcsh_naturality_defect(const DCSHFamily& om_k,
                                                        const DCSHFamily& om_l,
                                                        const ChainMap& f);

/* ------------------------- wedges and composition ------------------------- */

/* (Id_A /\ omega) for omega : S -> T, a family on A (x) S with values in
 * A (x) T:  member k interleaves the iterated (unreduced) diagonal of the
 * A-factor with omega_k,
 *
 *   (Id /\ omega)_k (a (x) s) = +- (a_(1) (x) m_1) | ... | (a_(k) (x) m_k)
 *
 * over Delta^{(k-1)}(a) and the words m_1|..|m_k of omega_k(s); the sign is
 * the Koszul cost of omega_k passing a and of the interleaving permutation.
 * source must be the tensor coalgebra A (x) S and target A (x) T.  Tables
 * cover every basis letter of source through its truncation. */
DCSHFamily wedge_left_identity(CoalgebraPtr idside, const DCSHFamily& om, CoalgebraPtr source,
                               CoalgebraPtr target);

/* (omega /\ Id_A) : S (x) A -> T (x) A, the mirror composite (omega_k first,
 * so no pass sign). */
DCSHFamily wedge_right_identity(const DCSHFamily& om, CoalgebraPtr idside, CoalgebraPtr source,
                                CoalgebraPtr target);

/* Composite of DCSH families (g after f): the cochain of the composite sends
 * a generator through F, then every letter of every word through G's image,
 * concatenating -- algebra maps compose without signs at the cochain level.
 * Throws Error("IncoherentFamily") when g's tables do not cover a letter
 * produced by f. */
DCSHFamily compose_families(const DCSHFamily& g, const DCSHFamily& f);

/* ------------------------- strictness ------------------------- */

enum class Strictness { weak, quasistrict, strict };
const char* to_string(Strictness s);

/* Certificate for the quasistrict grade: a derivation homotopy t between the
 * realized algebra maps A = Omega(Id /\ omega) Omega(omega) and
 * B = Omega(omega /\ Id) Omega(omega) (rebracketed to a common target),
 * solved on cobar generators in ascending degree:
 *
 *   d t(s^{-1}e) = A(s^{-1}e) - B(s^{-1}e) - t(d s^{-1}e),
 *
 * t extended to words as an (A, B)-derivation
 *   t(l_1..l_m) = sum_i (-1)^{|l_1..l_{i-1}|} A(l_1..l_{i-1}) t(l_i) B(l_{i+1}..l_m). */
struct DerivationHomotopy {
    bool solved = false;
    int through = -1;  // generators of degree <= through are certified
    std::vector<std::pair<TermRef, FormalSum>> t;  // per-generator values
    TermRef failed_letter = nullptr;               // first unsolvable generator
    FormalSum failed_rhs;
};

struct StrictnessEvidence {
    Strictness grade = Strictness::weak;
    int checked_through = -1;   // complex degrees certified by the grade
    bool family_equal = false;  // exact equality of the two wedge composites
    int disagree_k = 0;         // first family-level disagreement when not
    TermRef disagree_e = nullptr;
    DerivationHomotopy homotopy;  // quasistrict certificate (or its failure)
    std::string note;
};

struct AWCoalgebra {
    CoalgebraPtr c;     // normalized chains of the simplicial set
    CoalgebraPtr cc;    // the tensor coalgebra C (x) C receiving omega
    DCSHFamily omega;   // omega_1 = the Alexander-Whitney diagonal
    StrictnessEvidence strictness;
};

/* Alexander-Whitney coalgebra structure of a reduced simplicial set: the
 * diagonal as a DCSH map, transferred through the Eilenberg-MacLane SDR of
 * K x K and pulled back along the diagonal.  trunc is the SDR truncation;
 * the family tables cover letters of degree <= trunc - 1.  Strictness
 * evidence is gathered on the way: the exact family-equality test always,
 * the derivation-homotopy solve only when the families differ and the cobar
 * constructions are finite without a cap (the note records when it is not
 * attempted).  Throws Error("NotReduced") unless K has a single vertex. */
AWCoalgebra aw_omega(const SSet& k, int trunc);

/* Grade the coassociativity of omega: strict when (Id /\ omega) omega and
 * (omega /\ Id) omega agree exactly as families, quasistrict when a
 * derivation homotopy between their realizations exists through the
 * requested degree, weak otherwise -- with the failure recorded, never
 * silently passed.  The solve runs at cobar truncation through + 1, so the
 * family must cover letters of degree through + 2 (Error("IncoherentFamily")
 * otherwise); word_cap bounds the cobar constructions when the coalgebra has
 * degree-1 elements and shrinks checked_through accordingly. */
StrictnessEvidence classify_strictness(const AWCoalgebra& aw, int through, int word_cap = -1);

/* Entrywise equality of the materialized matrices through degree hi (or the
 * smaller of the two ranges): the comparison of choice between maps built on
 * independently constructed but identically enumerated complexes. */
bool same_matrices(const ChainMap& a, const ChainMap& b, int hi = -1);

/* ------------------------- homology tables ------------------------- */

/* The comultiplication induced on homology, written over the Kunneth cross
 * basis of the target: for every generator z of H_n(X), psi(z) is solved as
 * an integer combination of cross cycles [g (x) g'] (|g| + |g'| = n) modulo
 * boundaries.  Generators are the SNF-adapted bases of homology_basis; the
 * recorded change of basis is the generating cycles themselves, printed in
 * gens.  Cross coefficients of torsion pairs are canonicalized modulo the
 * gcd of the two generator orders.  kunneth_ok records, honestly, whether
 * every image class was expressible over crosses (it can fail when Tor terms
 * are present). */
struct ComultiplicationTable {
    struct CrossGen {
        int p = 0, a = 0;  // generator a of H_p ...
        int q = 0, b = 0;  // ... crossed with generator b of H_q
    };
    struct Degree {
        int n = 0;
        HomologyGroup group;            // H_n of the source
        std::vector<std::string> gens;  // generating cycles, printed
        std::vector<CrossGen> cols;
        IntMat m;  // num_gens rows x cols columns
        bool kunneth_ok = true;
        std::string note;
    };
    std::vector<Degree> rows;
    int hi = -1;
    bool counit_ok = true;  // cross pairs against the degree-0 class act as counit
};

/* psi must be a degree-0 chain map X -> X (x) X: the dst basis consists of
 * pair terms over the src basis (capped tensors are fine). */
ComultiplicationTable comultiplication_table(const ChainMap& psi, int up_to);

/* Orientation-robust comparison against the loop-space table of an odd
 * sphere S^d: H = Z exactly in degrees m(d-1) and d + m(d-1), with binomial
 * structure coefficients C(m, i), up to a consistent re-sign of the
 * generators.  Appends the reason to why on failure. */
bool odd_sphere_loop_table(const ComultiplicationTable& t, int d, int up_to,
                           std::string* why = nullptr);

/* ------------------------- loop comultiplication ------------------------- */

struct LoopComultiplication {
    AWCoalgebra aw;
    CoHochschild hh;    // HH(C)
    CoHochschild pair;  // HH(C (x) C)
    ComplexPtr target;  // hh.complex (x) hh.complex
    ChainMap omega_hat; // hh -> pair
    ChainMap qhat;      // pair -> target
    ChainMap psi_hat;   // the comultiplication on HH(C)
    ComplexPtr omega_target;  // Omega C (x) Omega C
    ChainMap psi;             // loop comultiplication on Omega C (src = hh.omega->c)
    int valid_up_to = -1;
};

/* Build everything from the simplicial set; the SDR truncation is raised to
 * trunc + 2 so the family covers every letter of the complex.  check
 * certifies psi, omega-hat, qhat, psi-hat, both counit laws, and the two
 * ladder squares (restriction to the cobar equals psi; projection to C
 * equals the diagonal); failures throw Error("IncoherentFamily", witness).
 * Errors: NotReduced; InfiniteLevel when K is not 1-reduced and no cap is
 * given. */
LoopComultiplication loop_comultiplication(const SSet& k, int trunc, int word_cap = -1,
                                           bool check = true);
/* Same from a prebuilt structure; requires omega to cover letters through
 * degree trunc + 1. */
LoopComultiplication loop_comultiplication(const AWCoalgebra& aw, int trunc, int word_cap = -1,
                                           bool check = true);

/* ------------------------- suspension closed forms ------------------------- */

/* psi on the cobar construction of the chains of a suspension, by the closed
 * letter rule
 *
 *   psi(s^{-1} e(x)) = s^{-1}e(x) (x) 1 + 1 (x) s^{-1}e(x)
 *     + sum (-1)^{|e(x_(1))| |e(x_(2))|} s^{-1}e(x_(1)) (x) s^{-1}e(x_(2))
 *
 * over the reduced diagonal of the base cell, extended multiplicatively with
 * the interchange Koszul sign.  csusp is the suspension coalgebra omega was
 * built on; base supplies the diagonals (cell order one degree down from the
 * suspension). */
ChainMap suspension_psi(AlgebraPtr omega, ComplexPtr target, CoalgebraPtr csusp,
                        CoalgebraPtr base);

/* The four-term closed formula for psi-hat on HH of a suspension.  psi_word
 * supplies the comultiplication of the word part (for the absolute case,
 * suspension_psi of the same suspension); the letters split off the
 * coefficient pass through lf (prepended block) and lg (appended block),
 * identities in the absolute case.  Per term (x_(1), x_(2), cbar) of the
 * base diagonal and (w_j, w^j, c_j) of psi_word(w), with sigma = (-1)^{|x_(1)|}:
 *
 *   psi-hat(e(x) (x) w) =
 *       c_j (e(x) (x) w_j) (x) (1 (x) w^j)
 *     + c_j (-1)^{|e(x)||w_j|} (1 (x) w_j) (x) (e(x) (x) w^j)
 *     + sigma cbar c_j (-1)^{(|x_(2)|+1)(|x_(1)|+|w_j|)}
 *           (1 (x) s^{-1}lf(e(x_(1))) . w_j) (x) (e(x_(2)) (x) w^j)
 *     + sigma cbar c_j (-1)^{|x_(2)|(|x_(1)|+|w|)}
 *           (e(x_(1)) (x) w_j) (x) (1 (x) w^j . s^{-1}lg(e(x_(2))))
 *
 * and psi-hat(unit (x) w) = c_j (unit (x) w_j) (x) (unit (x) w^j). */
ChainMap suspension_psi_hat(const CoHochschild& hh, ComplexPtr target, CoalgebraPtr base,
                            const ChainMap& psi_word, const ChainMap& lf, const ChainMap& lg);

struct SuspensionComult {
    SSet suspension;
    CoalgebraPtr c;     // chains of Sigma K'
    CoalgebraPtr base;  // chains of K'
    CoHochschild hh;
    ComplexPtr target;
    ChainMap psi;       // on hh.omega->c
    ChainMap psi_hat;   // the four-term closed form
    int valid_up_to = -1;
};

/* Fully independent of the SDR transfer machinery. */
SuspensionComult suspension_comult_closed_form(const SSet& base, int trunc, int word_cap = -1);

/* ------------------------- relative comultiplication ------------------------- */

struct RelativeComultiplication {
    CoalgebraPtr ck, cl;
    AWCoalgebra aw_k, aw_l;
    ChainMap cg, ch;     // chains of the two simplicial maps
    BicomodulePtr coef;  // C*K as a C*L-bicomodule via (C*g, C*h)
    CoHochschild hh;     // HH(C*K, C*L)
    CoHochschild big;    // over the pair coalgebra, coefficients C*K (x) C*K
    ComplexPtr target;
    ChainMap omega_star;  // the twisted extension
    ChainMap psi_hat;     // qhat after omega_star
    int valid_up_to = -1;
};

/* Comultiplicative structure of the homotopy-coincidence model of (g, h):
 * the coHochschild complex of C*K over C*L with coactions (C*g (x) 1) Delta
 * and (1 (x) C*h) Delta.  Throws Error("NotReduced") unless L is reduced and
 * Error("StructureNotRespected", witness) when either induced chain map
 * fails the exact cochain naturality square between the transferred
 * Alexander-Whitney structures. */
RelativeComultiplication relative_comultiplication(const SSet& k, const SSet& l, const SMap& g,
                                                   const SMap& h, int trunc, int word_cap = -1,
                                                   bool check = true);

}  // namespace cohoch
