#pragma once

/* Interned basis terms and integer formal sums of them.
 *
 * A Term labels one basis element of some free graded module: a named
 * generator (atom), a tensor pair, a tensor word (for bar/cobar-style word
 * complexes), or a (de)suspension of another term.  Terms are hash-consed:
 * structural equality is pointer equality, and each term carries a creation
 * sequence number so every ordered container of terms is reproducible run to
 * run (all enumeration loops in the library are deterministic).
 */

#include "intmat.hpp"

#include <map>
#include <string>
#include <vector>

namespace cohoch {

enum class TermKind : unsigned char { atom, pair, word, shift };

struct Term;
using TermRef = const Term*;

struct Term {
    TermKind kind;
    int dir = 0;  // shift only: +1 suspension, -1 desuspension
    int degree = 0;
    unsigned id = 0;  // creation order; total order on all live terms
    TermRef left = nullptr, right = nullptr;  // pair
    TermRef child = nullptr;                  // shift
    std::vector<TermRef> letters;             // word
    std::string name;                         // atom
};

TermRef atom(const std::string& name, int degree);
TermRef pair_term(TermRef a, TermRef b);
TermRef word_term(std::vector<TermRef> letters);  // empty word = unit of a word complex, degree 0
TermRef shift_term(TermRef t, int dir);

std::string to_string(TermRef t);

struct TermOrd {
    bool operator()(TermRef a, TermRef b) const { return a->id < b->id; }
};

/* Integer formal sum of terms; the zero sum has no entries. */
struct FormalSum {
    std::map<TermRef, Int, TermOrd> c;

    FormalSum() = default;
    FormalSum(TermRef t, Int k = 1) { add(t, std::move(k)); }

    void add(TermRef t, const Int& k) {
        if (k == 0) return;
        auto [it, fresh] = c.try_emplace(t, k);
        if (!fresh) {
            it->second += k;
            if (it->second == 0) c.erase(it);
        }
    }
    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [t, k] : o.c) add(t, k);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [t, k] : o.c) add(t, -k);
        return *this;
    }
    FormalSum& scale(const Int& k) {
        if (k == 0) { c.clear(); return *this; }
        for (auto& [t, v] : c) v *= k;
        return *this;
    }
    bool zero() const { return c.empty(); }
};

inline FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
inline FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
inline FormalSum operator*(const Int& k, FormalSum a) { return a.scale(k); }

std::string to_string(const FormalSum& s);

}  // namespace cohoch
