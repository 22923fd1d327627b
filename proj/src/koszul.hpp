#pragma once

/* Centralized sign engine.  Every sign in the library routes through these
 * helpers; no construction computes a (-1)^k inline.
 *
 * Conventions, fixed once:
 *   - (f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w), and generally a tensor
 *     product of operators acquires (-1)^{|op_b| * (|x_0|+...+|x_{b-1}|)} per slot.
 *   - An operator of degree p moved past letters of total degree s costs (-1)^{p*s}.
 *   - Permuting homogeneous letters costs (-1)^{|x||y|} per transposition of
 *     adjacent letters (Koszul), or plain parity when counting positions only.
 *   - Suspension/desuspension commute with d at the cost of one sign:
 *     d(s v) = -s(d v), d(s' v) = -s'(d v).
 */

#include <vector>

namespace cohoch {

inline int parity_sign(long long p) { return (p % 2 == 0) ? 1 : -1; }

/* perm[i] = original position of the element now at slot i; sign is the
 * ordinary permutation parity. */
inline int perm_parity_sign(const std::vector<int>& perm) {
    int inv = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inv;
    return parity_sign(inv);
}

/* Koszul sign of reordering letters with degrees degs (indexed by original
 * position) into the order given by perm. */
inline int koszul_perm_sign(const std::vector<int>& degs, const std::vector<int>& perm) {
    long long e = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) e += static_cast<long long>(degs[perm[i]]) * degs[perm[j]];
    return parity_sign(e);
}

/* Sign for applying (f_0 (x) ... (x) f_{m-1}) to (x_0 (x) ... (x) x_{m-1}):
 * each operator passes the arguments to its left. */
inline int ops_tensor_sign(const std::vector<int>& op_degs, const std::vector<int>& arg_degs) {
    long long e = 0, s = 0;
    for (size_t b = 0; b < op_degs.size(); ++b) {
        e += static_cast<long long>(op_degs[b]) * s;
        s += arg_degs[b];
    }
    return parity_sign(e);
}

/* Operator of degree op_deg moved past letters of total degree sum_passed. */
inline int pass_sign(int op_deg, long long sum_passed) {
    return parity_sign(static_cast<long long>(op_deg) * sum_passed);
}

/* Shuffle sign for complementary index sets a, b (disjoint, union an interval):
 * (-1)^{#\{(x,y) in a x b : x < y\}}.  Matches the Eilenberg-Zilber shuffle
 * convention where a holds the degeneracies applied to the first factor. */
inline int shuffle_sign(const std::vector<int>& a, const std::vector<int>& b) {
    long long inv = 0;
    for (int x : a)
        for (int y : b)
            if (x < y) ++inv;
    return parity_sign(inv);
}

}  // namespace cohoch
