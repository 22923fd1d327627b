#pragma once

/* Exact dense linear algebra over arbitrary-precision integers.
 *
 * Everything downstream (homology, chain-level identities) reduces to integer
 * matrix arithmetic and Smith normal form.  Matrices here are small (at most a
 * few hundred rows), but SNF intermediates can grow far beyond 64 bits, so the
 * scalar is an arbitrary-precision integer throughout.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cohoch {

using Int = boost::multiprecision::cpp_int;

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<Int> a;  // row-major, rows*cols entries

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Int& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Int& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMat identity(int n);
    static IntMat zero(int r, int c) { return IntMat(r, c); }

    bool is_zero() const;
    bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const IntMat& o) const { return !(*this == o); }
};

IntMat operator*(const IntMat& x, const IntMat& y);
IntMat operator+(const IntMat& x, const IntMat& y);
IntMat operator-(const IntMat& x, const IntMat& y);
IntMat operator-(const IntMat& x);
std::vector<Int> operator*(const IntMat& m, const std::vector<Int>& v);

/* [x | y], matching row counts. */
IntMat hcat(const IntMat& x, const IntMat& y);

std::string to_string(const IntMat& m);

/* Smith normal form  u * m * v = d  with d diagonal, d_1 | d_2 | ... >= 0 and
 * u, v unimodular (integer inverses uinv, vinv are produced alongside).
 * Pivot choice: nonzero entry of minimal absolute value, ties broken by lowest
 * (row, col); this makes the transforms reproducible run to run. */
struct SmithForm {
    IntMat d;
    IntMat u, uinv;  // rows x rows
    IntMat v, vinv;  // cols x cols
    int rank = 0;
    std::vector<Int> divisors;  // nonzero diagonal entries d_1..d_rank
};

SmithForm smith_normal_form(const IntMat& m);

/* Exact integer solve m x = b via a precomputed SNF of m; nullopt when b is
 * not in the integer column span. */
std::optional<std::vector<Int>> solve(const SmithForm& s, const std::vector<Int>& b);
std::optional<IntMat> solve(const SmithForm& s, const IntMat& b);

/* Columns form a basis of ker(m) as a direct summand of Z^cols. */
IntMat kernel_basis(const SmithForm& s);

}  // namespace cohoch
