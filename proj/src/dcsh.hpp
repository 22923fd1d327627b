#pragma once

/* Coalgebra morphisms up to strong homotopy.
 *
 * A degree-0 chain map f : Y -> X between connected chain coalgebras carries
 * such a structure when it extends to an algebra map between the cobar
 * constructions.  The extension is equivalently presented three ways:
 *
 *   - a twisting cochain: degree -1 components F_k : Y -> T^k(s^{-1} Xbar);
 *   - a family of maps omega_k : Ybar -> (Xbar)^{(x) k} of degree k - 1
 *     (the cochain with the desuspensions stripped), with omega_1 = f and a
 *     per-k coherence identity tying omega_k to the smaller components;
 *   - the realized algebra map itself, Omega Y -> Omega X, sending the
 *     generator s^{-1}e to sum_k (s^{-1})^{(x) k} omega_k(e).
 *
 * This header provides conversions between the three views, the construction
 * of the twisting cochain from SDR data whose retraction f is transferred
 * through the homotopy, coherence verification with per-generator residuals,
 * and the realization as a certified chain algebra map.
 */

#include "constructions.hpp"
#include "sdr.hpp"

#include <unordered_map>

namespace cohoch {

/* An SDR whose endpoints carry coalgebra structures materialized on the very
 * complexes of the SDR (x->c == sdr.x, y->c == sdr.y) with nabla a coalgebra
 * map.  Built over an Eilenberg-MacLane SDR by ez_data below. */
struct EZData {
    SDRData sdr;
    CoalgebraPtr x, y;
};

/* The product chains keep their front/back diagonal; the tensor side gets the
 * interchange diagonal of the factor coalgebras, on the same complex as
 * e.sdr.x.  With verify set, re-checks the coalgebra axioms and that nabla is
 * a coalgebra map; throws Error("NotEZData", witness) on failure. */
EZData ez_data(const EMSDR& e, bool verify = true, int check_up_to = 1 << 26);

/* Twisting cochain components F_k : Y -> T^k(s^{-1} Xbar), each of degree -1;
 * values are length-k words of desuspended target letters, the same interned
 * terms that span a cobar construction over the target.  Tables cover source
 * letters of degree 1..gen_hi; construction certifies F_k = 0 for k > cap on
 * every covered letter. */
struct TwistingCochain {
    CoalgebraPtr source, target;
    int cap = 0;
    int gen_hi = 0;
    std::vector<std::unordered_map<TermRef, FormalSum>> fk;  // fk[k], 1 <= k <= cap
    std::unordered_map<TermRef, int> vanish;  // per letter: largest k with F_k != 0

    FormalSum apply(int k, TermRef e) const;
    FormalSum image(TermRef e) const;  // sum over k: the cobar generator image
};

/* The same data with the desuspensions stripped: omega_k of degree k - 1 with
 * values length-k words of plain target letters. */
struct DCSHFamily {
    CoalgebraPtr source, target;
    int cap = 0;
    int gen_hi = 0;
    std::vector<std::unordered_map<TermRef, FormalSum>> omega;  // omega[k], 1 <= k <= cap
    std::unordered_map<TermRef, int> vanish;

    FormalSum apply(int k, TermRef e) const;
};

/* Shift conjugation both ways.  Moving the k desuspensions into the slots of
 * a word costs the Koszul sign of a degree -1 operator per slot, the same
 * sign in either direction. */
DCSHFamily family_of(const TwistingCochain& t);
TwistingCochain cochain_of(const DCSHFamily& f);

/* Family of a strict coalgebra map: omega_1 = f, nothing above. */
DCSHFamily strict_family(CoalgebraPtr source, CoalgebraPtr target, const ChainMap& f);

/* Precompose a family with a strict coalgebra map g into its source
 * (omega_k' = omega_k g), e.g. to pull a product family back along a
 * diagonal. */
DCSHFamily precompose_strict(const DCSHFamily& fam, const ChainMap& g, CoalgebraPtr source);

/* Twisting cochain of the retraction f of an SDR, by the transferred
 * recursion
 *
 *   F_1 = s^{-1} f,     F_k = - sum_{i+j=k} (F_i (x) F_j) Delta_Y h,
 *
 * cross-checked against the closed form  F_k = -(s^{-1}f)^{(x) k} H_k, where
 * H_k expands Delta_Y h slotwise k - 1 times (signs fixed by the agreement of
 * the two forms; see closed_fk).  cap < 0 defaults to trunc + 1.  Vanishing
 * beyond cap is certified through the H tables: a vanishing H level forces
 * all later levels to vanish.  When the certificate fails on some letter,
 * throws Error("NoLocalFiniteness", witness). */
DCSHFamily gm_twisting_cochain(const EZData& s, int trunc, int cap = -1);

/* Closed-form evaluation on one source letter (exposed for the independent
 * agreement test): -(s^{-1}f)^{(x) k} H_k with H_k = h_k ... h_2 and
 *   h_m = sum_t (-1)^t Id^{(x) t} (x) (Delta_Y h) (x) Id^{(x) m-2-t}
 * applied with the Koszul pass of a degree +1 operator. */
FormalSum closed_fk(const EZData& s, int trunc, int k, TermRef y_letter);

/* Coherence of a family: for every k and every covered generator e, the
 * residual of the identity
 *
 *   omega_k dbar + (-1)^k d_{(x) k} omega_k
 *     = sum_{i+j=k} (-1)^{j(i-1)} (omega_i (x) omega_j) Deltabar_src
 *     - sum_t (-1)^t (Id^{(x) t} (x) Deltabar_tgt (x) Id) omega_{k-1}
 *
 * (reduced diagonals and differentials throughout; tensor factors of degree 0
 * are invisible to the cobar construction).  Conditions run for k = 1..cap+1,
 * with omega_{cap+1} = 0, so the finiteness of the family is part of what is
 * checked.  All residuals zero <=> the realization is a chain map. */
struct DCSHReport {
    struct Line {
        int k = 0;
        TermRef e = nullptr;
        bool ok = true;
        FormalSum residual;
    };
    std::vector<Line> lines;
    bool ok = true;
    int hi = -1;    // generators checked through this degree
    int max_k = 0;  // conditions checked for k = 1..max_k
};
DCSHReport verify_dcsh(const DCSHFamily& om, int trunc);

/* The realized algebra map between cobar constructions.  Generator images
 * are the cochain images; words map to concatenated products.  With check
 * set, verifies coherence first (Error("IncoherentFamily", witness) citing
 * the failing k and element) and asserts the result is a chain map.  Letters
 * up to degree min(source trunc, trunc + 1) appear in the cobar basis, so the
 * family must cover that range (std::out_of_range otherwise). */
struct Realization {
    AlgebraPtr src, dst;
    ChainMap map;
};
Realization realize(const DCSHFamily& om, int trunc, int word_cap = -1, bool check = true);

}  // namespace cohoch
