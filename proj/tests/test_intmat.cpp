#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "intmat.hpp"

#include <random>

using namespace cohoch;

namespace {

/* Independent oracle: d_1 * ... * d_k equals the gcd of all k x k minors.
 * Brute-force determinants keep this totally separate from the SNF code path. */

Int det_brute(const IntMat& m) {
    int n = m.rows;
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Int acc = 0;
    for (int j = 0; j < n; ++j) {
        if (m(0, j) == 0) continue;
        IntMat sub(n - 1, n - 1);
        for (int r = 1; r < n; ++r)
            for (int c = 0, cc = 0; c < n; ++c)
                if (c != j) sub(r - 1, cc++) = m(r, c);
        Int term = m(0, j) * det_brute(sub);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

void combos(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) { out.push_back(cur); return; }
    for (int i = start; i < n; ++i) {
        cur.push_back(i);
        combos(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Int> divisors_by_minors(const IntMat& m) {
    std::vector<Int> ds;
    Int prev = 1;
    for (int k = 1; k <= std::min(m.rows, m.cols); ++k) {
        std::vector<std::vector<int>> rsets, csets, _;
        std::vector<int> cur;
        combos(m.rows, k, 0, cur, rsets);
        combos(m.cols, k, 0, cur, csets);
        Int g = 0;
        for (const auto& rs : rsets)
            for (const auto& cs : csets) {
                IntMat sub(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) sub(i, j) = m(rs[i], cs[j]);
                g = gcd(g, det_brute(sub));
                g = abs(g);
            }
        if (g == 0) break;
        ds.push_back(g / prev);
        prev = g;
    }
    return ds;
}

IntMat random_matrix(std::mt19937& rng, int r, int c) {
    IntMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (rng() % 2 == 0) m(i, j) = static_cast<int>(rng() % 19) - 9;
    return m;
}

void check_snf_contract(const IntMat& m) {
    SmithForm s = smith_normal_form(m);
    // factorization and unimodularity, exactly
    CHECK(s.u * m * s.v == s.d);
    CHECK(s.u * s.uinv == IntMat::identity(m.rows));
    CHECK(s.uinv * s.u == IntMat::identity(m.rows));
    CHECK(s.v * s.vinv == IntMat::identity(m.cols));
    CHECK(s.vinv * s.v == IntMat::identity(m.cols));
    // diagonal, nonnegative, divisibility chain
    for (int i = 0; i < s.d.rows; ++i)
        for (int j = 0; j < s.d.cols; ++j)
            if (i != j) CHECK(s.d(i, j) == 0);
    for (int i = 0; i < std::min(s.d.rows, s.d.cols); ++i) CHECK(s.d(i, i) >= 0);
    for (int i = 0; i + 1 < std::min(s.d.rows, s.d.cols); ++i) {
        if (s.d(i, i) == 0)
            CHECK(s.d(i + 1, i + 1) == 0);
        else
            CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
    }
    // invariant factors agree with the minor-gcd oracle
    CHECK(s.divisors == divisors_by_minors(m));
}

}  // namespace

TEST_CASE("snf of fixed small matrices") {
    IntMat m(2, 2);
    m(0, 0) = 2; m(0, 1) = 4;
    m(1, 0) = 6; m(1, 1) = 8;
    SmithForm s = smith_normal_form(m);
    // invariant factors: gcd of entries is 2, |det| = 8, so diag(2, 4)
    REQUIRE(s.rank == 2);
    CHECK(s.d(0, 0) == 2);
    CHECK(s.d(1, 1) == 4);
    check_snf_contract(m);

    check_snf_contract(IntMat::identity(4));
    SmithForm id = smith_normal_form(IntMat::identity(4));
    CHECK(id.d == IntMat::identity(4));

    check_snf_contract(IntMat::zero(3, 5));
    CHECK(smith_normal_form(IntMat::zero(3, 5)).rank == 0);

    check_snf_contract(IntMat(0, 3));
    check_snf_contract(IntMat(3, 0));
}

TEST_CASE("snf contract on random sparse matrices") {
    std::mt19937 rng(20260815u);
    for (int trial = 0; trial < 250; ++trial) {
        int r = 1 + static_cast<int>(rng() % 5);
        int c = 1 + static_cast<int>(rng() % 5);
        check_snf_contract(random_matrix(rng, r, c));
    }
}

TEST_CASE("exact solve") {
    std::mt19937 rng(7u);
    for (int trial = 0; trial < 100; ++trial) {
        int r = 1 + static_cast<int>(rng() % 4);
        int c = 1 + static_cast<int>(rng() % 4);
        IntMat m = random_matrix(rng, r, c);
        std::vector<Int> x(c);
        for (int j = 0; j < c; ++j) x[j] = static_cast<int>(rng() % 9) - 4;
        std::vector<Int> b = m * x;
        auto got = solve(smith_normal_form(m), b);
        REQUIRE(got.has_value());
        CHECK(m * *got == b);
    }

    IntMat two(1, 1);
    two(0, 0) = 2;
    CHECK_FALSE(solve(smith_normal_form(two), std::vector<Int>{Int(1)}).has_value());
    CHECK(solve(smith_normal_form(two), std::vector<Int>{Int(6)}).has_value());
}

TEST_CASE("kernel basis spans the integer kernel") {
    std::mt19937 rng(99u);
    for (int trial = 0; trial < 60; ++trial) {
        int r = 1 + static_cast<int>(rng() % 3);
        int c = 1 + static_cast<int>(rng() % 3);
        IntMat m = random_matrix(rng, r, c);
        SmithForm s = smith_normal_form(m);
        IntMat k = kernel_basis(s);
        CHECK(k.cols == c - s.rank);
        if (k.cols > 0) CHECK((m * k).is_zero());

        // every small integer kernel vector is an integer combination of the basis
        SmithForm ks = smith_normal_form(k);
        std::vector<int> idx(c, -2);
        for (;;) {
            std::vector<Int> v(c);
            for (int j = 0; j < c; ++j) v[j] = idx[j];
            bool in_kernel = true;
            std::vector<Int> mv = m * v;
            for (const Int& e : mv)
                if (e != 0) { in_kernel = false; break; }
            if (in_kernel) CHECK(solve(ks, v).has_value());
            int p = 0;
            while (p < c && ++idx[p] > 2) idx[p++] = -2;
            if (p == c) break;
        }
    }
}
