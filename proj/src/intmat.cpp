#include "intmat.hpp"

#include <sstream>
#include <stdexcept>

namespace cohoch {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

bool IntMat::is_zero() const {
    for (const Int& x : a)
        if (x != 0) return false;
    return true;
}

IntMat operator*(const IntMat& x, const IntMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("IntMat multiply: shape mismatch");
    IntMat r(x.rows, y.cols);
    // skip zero entries of x: chain-complex matrices are sparse in practice
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Int& xv = x(i, k);
            if (xv == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                const Int& yv = y(k, j);
                if (yv != 0) r(i, j) += xv * yv;
            }
        }
    return r;
}

IntMat operator+(const IntMat& x, const IntMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("IntMat add: shape mismatch");
    IntMat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}

IntMat operator-(const IntMat& x, const IntMat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("IntMat sub: shape mismatch");
    IntMat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}

IntMat operator-(const IntMat& x) {
    IntMat r = x;
    for (Int& v : r.a) v = -v;
    return r;
}

std::vector<Int> operator*(const IntMat& m, const std::vector<Int>& v) {
    if (m.cols != static_cast<int>(v.size())) throw std::invalid_argument("IntMat vec multiply: shape mismatch");
    std::vector<Int> r(m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m(i, j) != 0 && v[j] != 0) r[i] += m(i, j) * v[j];
    return r;
}

IntMat hcat(const IntMat& x, const IntMat& y) {
    if (x.rows != y.rows) throw std::invalid_argument("hcat: row mismatch");
    IntMat r(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) r(i, j) = x(i, j);
        for (int j = 0; j < y.cols; ++j) r(i, x.cols + j) = y(i, j);
    }
    return r;
}

std::string to_string(const IntMat& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m.rows; ++i) {
        os << (i ? " [" : "[");
        for (int j = 0; j < m.cols; ++j) os << (j ? "," : "") << m(i, j);
        os << "]" << (i + 1 < m.rows ? "\n" : "");
    }
    os << "]";
    return os.str();
}

/* ------------------------------- Smith normal form ------------------------------- */

namespace {

/* All elementary operations keep the invariant  d = u * m_original * v,
 * with uinv, vinv the running inverses of u, v. */
struct SnfWork {
    IntMat d, u, uinv, v, vinv;

    void row_swap(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < d.cols; ++c) std::swap(d(i, c), d(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u(i, c), u(j, c));
        for (int r = 0; r < uinv.rows; ++r) std::swap(uinv(r, i), uinv(r, j));
    }
    void col_swap(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < d.rows; ++r) std::swap(d(r, i), d(r, j));
        for (int r = 0; r < v.rows; ++r) std::swap(v(r, i), v(r, j));
        for (int c = 0; c < vinv.cols; ++c) std::swap(vinv(i, c), vinv(j, c));
    }
    // row i += k * row j
    void row_add(int i, int j, const Int& k) {
        if (k == 0) return;
        for (int c = 0; c < d.cols; ++c) d(i, c) += k * d(j, c);
        for (int c = 0; c < u.cols; ++c) u(i, c) += k * u(j, c);
        for (int r = 0; r < uinv.rows; ++r) uinv(r, j) -= k * uinv(r, i);
    }
    // col i += k * col j
    void col_add(int i, int j, const Int& k) {
        if (k == 0) return;
        for (int r = 0; r < d.rows; ++r) d(r, i) += k * d(r, j);
        for (int r = 0; r < v.rows; ++r) v(r, i) += k * v(r, j);
        for (int c = 0; c < vinv.cols; ++c) vinv(j, c) -= k * vinv(i, c);
    }
    void row_negate(int i) {
        for (int c = 0; c < d.cols; ++c) d(i, c) = -d(i, c);
        for (int c = 0; c < u.cols; ++c) u(i, c) = -u(i, c);
        for (int r = 0; r < uinv.rows; ++r) uinv(r, i) = -uinv(r, i);
    }
    /* general 2x2 unimodular transform on rows (i, j):
     *   row_i' = a*row_i + b*row_j,  row_j' = c*row_i + e*row_j,  a*e - b*c = 1 */
    void row_mix(int i, int j, const Int& a, const Int& b, const Int& c, const Int& e) {
        for (int k = 0; k < d.cols; ++k) {
            Int x = d(i, k), y = d(j, k);
            d(i, k) = a * x + b * y;
            d(j, k) = c * x + e * y;
        }
        for (int k = 0; k < u.cols; ++k) {
            Int x = u(i, k), y = u(j, k);
            u(i, k) = a * x + b * y;
            u(j, k) = c * x + e * y;
        }
        // inverse of [[a,b],[c,e]] (det 1) is [[e,-b],[-c,a]]; uinv multiplies on the right
        for (int r = 0; r < uinv.rows; ++r) {
            Int x = uinv(r, i), y = uinv(r, j);
            uinv(r, i) = e * x - c * y;
            uinv(r, j) = -b * x + a * y;
        }
    }
};

// extended gcd: returns g >= 0 and x, y with x*a + y*b = g
Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        if (a < 0) { x = -1; y = 0; return -a; }
        x = 1; y = 0; return a;
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

}  // namespace

SmithForm smith_normal_form(const IntMat& m) {
    SnfWork w;
    w.d = m;
    w.u = IntMat::identity(m.rows);
    w.uinv = IntMat::identity(m.rows);
    w.v = IntMat::identity(m.cols);
    w.vinv = IntMat::identity(m.cols);

    const int n = std::min(m.rows, m.cols);
    int t = 0;
    for (; t < n; ++t) {
        // pivot: nonzero entry of minimal absolute value in the active block,
        // ties broken by lowest (row, col)
        for (;;) {
            int pr = -1, pc = -1;
            Int best;
            for (int i = t; i < w.d.rows; ++i)
                for (int j = t; j < w.d.cols; ++j) {
                    if (w.d(i, j) == 0) continue;
                    Int v = abs(w.d(i, j));
                    if (pr < 0 || v < best) { best = v; pr = i; pc = j; }
                }
            if (pr < 0) goto diagonal_done;  // active block is zero
            w.row_swap(t, pr);
            w.col_swap(t, pc);

            bool clean = true;
            for (int i = t + 1; i < w.d.rows; ++i) {
                if (w.d(i, t) == 0) continue;
                Int q = w.d(i, t) / w.d(t, t);  // truncating: |remainder| < |pivot|
                w.row_add(i, t, -q);
                if (w.d(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < w.d.cols; ++j) {
                if (w.d(t, j) == 0) continue;
                Int q = w.d(t, j) / w.d(t, t);
                w.col_add(j, t, -q);
                if (w.d(t, j) != 0) clean = false;
            }
            if (clean) break;  // row t and column t cleared; smaller entries otherwise remain
        }
    }
diagonal_done:

    // sign-normalize the diagonal
    for (int i = 0; i < std::min(t, n); ++i)
        if (w.d(i, i) < 0) w.row_negate(i);

    // enforce the divisibility chain d_i | d_{i+1} with 2x2 unimodular fixes
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i + 1 < t; ++i) {
            Int a = w.d(i, i), b = w.d(i + 1, i + 1);
            if (a == 0 || b % a == 0) continue;
            changed = true;
            // place b next to a, then reduce the 2x2 block [[a, b], [0, b]]
            w.col_add(i, i + 1, 1);  // d(i+1, i) = b
            Int x, y;
            Int g = ext_gcd(a, b, x, y);
            w.row_mix(i, i + 1, x, y, -(b / g), a / g);
            // now d(i,i) = g, d(i, i+1) = y*b ... clear the off-diagonal remainder
            Int q = w.d(i, i + 1) / g;
            w.col_add(i + 1, i, -q);
            if (w.d(i + 1, i + 1) < 0) w.row_negate(i + 1);
        }
    }

    SmithForm s;
    s.d = w.d;
    s.u = w.u;
    s.uinv = w.uinv;
    s.v = w.v;
    s.vinv = w.vinv;
    for (int i = 0; i < n; ++i)
        if (w.d(i, i) != 0) {
            ++s.rank;
            s.divisors.push_back(w.d(i, i));
        }
    return s;
}

std::optional<std::vector<Int>> solve(const SmithForm& s, const std::vector<Int>& b) {
    if (static_cast<int>(b.size()) != s.d.rows) throw std::invalid_argument("solve: size mismatch");
    std::vector<Int> c = s.u * b;
    std::vector<Int> y(s.d.cols);
    for (int i = 0; i < s.d.rows; ++i) {
        if (i < s.rank) {
            if (c[i] % s.d(i, i) != 0) return std::nullopt;
            y[i] = c[i] / s.d(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return s.v * y;
}

std::optional<IntMat> solve(const SmithForm& s, const IntMat& b) {
    IntMat x(s.d.cols, b.cols);
    std::vector<Int> col(b.rows);
    for (int j = 0; j < b.cols; ++j) {
        for (int i = 0; i < b.rows; ++i) col[i] = b(i, j);
        auto xj = solve(s, col);
        if (!xj) return std::nullopt;
        for (int i = 0; i < s.d.cols; ++i) x(i, j) = (*xj)[i];
    }
    return x;
}

IntMat kernel_basis(const SmithForm& s) {
    IntMat k(s.v.rows, s.v.cols - s.rank);
    for (int j = s.rank; j < s.v.cols; ++j)
        for (int i = 0; i < s.v.rows; ++i) k(i, j - s.rank) = s.v(i, j);
    return k;
}

}  // namespace cohoch
