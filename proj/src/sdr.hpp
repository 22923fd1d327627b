#pragma once

/* Strong deformation retracts of chain complexes, the Eilenberg-MacLane SDR
 * between the tensor of normalized chains and the chains of a cartesian
 * product (shuffle map, front-back splitting, and the explicit interchange
 * homotopy), and the basic perturbation lemma.
 */

#include "simplicial.hpp"

namespace cohoch {

/* (nabla, f, h) between X and Y together with a filtration weight for every
 * basis element of Y.  The SDR conditions, all checkable with verify_sdr:
 *   (1) f nabla = Id_X
 *   (2) d h + h d = nabla f - Id_Y
 *   (3) h nabla = 0   (4) f h = 0   (5) h h = 0
 */
struct SDRData {
    ComplexPtr x, y;
    ChainMap nabla;                      // X -> Y, degree 0
    ChainMap f;                          // Y -> X, degree 0
    ChainMap h;                          // Y -> Y, degree +1
    std::vector<std::vector<int>> filt;  // [degree][basis index] weight on Y
};

int max_filtration_weight(const SDRData& s);

/* X = Y = c, nabla = f = Id, h = 0, weights 0. */
SDRData identity_sdr(ComplexPtr c);

struct SDRReport {
    struct Line {
        std::string condition;
        bool ok = true;
        int degree = -1;      // first failing degree
        std::string witness;  // first failing basis element and its defect
    };
    std::vector<Line> lines;
    bool ok = true;
};
SDRReport verify_sdr(const SDRData& s, int up_to = 1 << 26);

/* The Eilenberg-MacLane SDR  C(K) (x) C(L)  <==>  C(K x L).
 *
 *   f(x, y)      = sum_l  front_l(x) (x) back_{n-l}(y)
 *   nabla(x (x) y) = sum over (A,B) shuffles  sign(A,B) (s_A x, s_B y)
 *   h(x, y)      = sum_{m < r <= n} sum_{A u B = [m+1,n], |A| = n-r}
 *                    sign * (s_{A u {m}} x_{0..r}, s_B y_{0..m r..n})
 *
 * The filtration weight of a product cell is the simplicial degree of its
 * K component (configurable through the weight argument). */
struct EMSDR {
    ProductStructure ps;
    CoalgebraPtr ck, cl;  // chains of the factors
    CoalgebraPtr cy;      // chains of the product, with its coalgebra structure
    SDRData sdr;          // sdr.x = tensor of the factor chains, sdr.y = cy->c
};
EMSDR em_sdr(const SSet& k, const SSet& l, int trunc,
             const std::function<int(int, int)>& weight = {});

/* Simplicial map K x L -> K2 x L2 induced componentwise by a and b. */
SMap product_smap(const ProductStructure& src, const SSet& k2, const SSet& l2,
                  const ProductStructure& dst, const SMap& a, const SMap& b);

/* ------------------------------- perturbation ------------------------------- */

struct Perturbation {
    ChainMap theta;  // degree -1 on Y; (d + theta)^2 = 0, strictly weight-lowering
};

/* theta read off as (differential of twisted) - (differential of plain) for
 * two complexes sharing the same basis atoms, e.g. the chains of a twisted
 * cartesian product against the chains of the plain product. */
Perturbation differential_difference(ComplexPtr twisted, ComplexPtr plain);

/* Basic perturbation lemma.  Checks that theta strictly lowers the recorded
 * filtration (error PerturbationNotLowering) and that (d + theta)^2 = 0
 * (error SquareNotZero), then transfers the perturbation through the SDR:
 *
 *   nabla' = nabla + sum (h theta)^k nabla     f' = f + sum f (theta h)^k
 *   d'     = d_X   + sum f (theta h)^{k-1} theta nabla
 *   h'     = h     + sum (h theta)^k h
 *
 * The series terminate within max filtration weight terms; the result is an
 * SDR onto (Y, d + theta) with the original weights, re-verified on return. */
SDRData basic_perturbation(const SDRData& s, const Perturbation& p);

}  // namespace cohoch
