#include "slnz/intmat.hpp"

#include <algorithm>
#include <sstream>

#include "slnz/numtheory.hpp"

namespace slnz {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool IntMat::is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

bool IntMat::is_zero() const {
    for (const Int& x : a_)
        if (x != 0) return false;
    return true;
}

IntMat IntMat::transpose() const {
    IntMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            t.at(j, i) = at(i, j);
    return t;
}

size_t IntMat::max_entry_bits() const {
    size_t b = 0;
    for (const Int& x : a_)
        if (x != 0) b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
    return b;
}

std::string IntMat::to_text() const {
    std::ostringstream os;
    os << rows_ << ' ' << cols_ << '\n';
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << at(i, j).get_str();
        }
        os << '\n';
    }
    return os.str();
}

IntMat mul(const IntMat& a, const IntMat& b) {
    if (a.cols() != b.rows())
        throw DimensionError("mul: inner dimensions differ");
    IntMat c(a.rows(), b.cols());
    Int t;
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) {
                t = aik * b.at(k, j);
                c.at(i, j) += t;
            }
        }
    return c;
}

Int det_exact(const IntMat& a) {
    if (!a.is_square()) throw DimensionError("det_exact: matrix not square");
    int n = a.rows();
    if (n == 0) return 1;
    IntMat m = a;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = k; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m.at(i, k) = 0;
        }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

IntMat inverse_unimodular(const IntMat& a) {
    Int d = det_exact(a);
    if (d != 1 && d != -1)
        throw NotUnimodularError("inverse: determinant is " + d.get_str() + ", not +-1");
    int n = a.rows();
    // Gauss-Jordan over Q; the result is integral because |det| = 1.
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = Rat(a.at(i, j));
        m[i][n + i] = 1;
    }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        std::swap(m[c], m[piv]);
        Rat inv = 1 / m[c][c];
        for (int j = c; j < 2 * n; ++j) m[c][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (int j = c; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    IntMat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat v = m[i][n + j];
            v.canonicalize();
            if (v.get_den() != 1)
                throw NotUnimodularError("inverse: non-integer entry (internal)");
            r.at(i, j) = v.get_num();
        }
    return r;
}

namespace {

// Quotient with remainder of minimal absolute value (deterministic tie toward
// the floor quotient). Keeps SNF entry growth down.
Int round_div(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    // Floor remainder has the sign of b; shift into the minimal-magnitude one.
    if (b > 0 ? r * 2 > b : r * 2 < b) q += 1;
    return q;
}

struct SnfWork {
    IntMat D, U, V;

    void row_sub(int i, int k, const Int& q) { // row_i -= q*row_k in D and U
        if (q == 0) return;
        for (int j = 0; j < D.cols(); ++j) D.at(i, j) -= q * D.at(k, j);
        for (int j = 0; j < U.cols(); ++j) U.at(i, j) -= q * U.at(k, j);
    }
    void col_sub(int j, int k, const Int& q) { // col_j -= q*col_k in D and V
        if (q == 0) return;
        for (int i = 0; i < D.rows(); ++i) D.at(i, j) -= q * D.at(i, k);
        for (int i = 0; i < V.rows(); ++i) V.at(i, j) -= q * V.at(i, k);
    }
    void row_swap(int i, int k) {
        if (i == k) return;
        for (int j = 0; j < D.cols(); ++j) std::swap(D.at(i, j), D.at(k, j));
        for (int j = 0; j < U.cols(); ++j) std::swap(U.at(i, j), U.at(k, j));
    }
    void col_swap(int j, int k) {
        if (j == k) return;
        for (int i = 0; i < D.rows(); ++i) std::swap(D.at(i, j), D.at(i, k));
        for (int i = 0; i < V.rows(); ++i) std::swap(V.at(i, j), V.at(i, k));
    }
    void row_neg(int i) {
        for (int j = 0; j < D.cols(); ++j) D.at(i, j) = -D.at(i, j);
        for (int j = 0; j < U.cols(); ++j) U.at(i, j) = -U.at(i, j);
    }
};

} // namespace

SmithForm smith_normal_form(const IntMat& a) {
    int r = a.rows(), c = a.cols();
    SnfWork w{a, IntMat::identity(r), IntMat::identity(c)};
    int tmax = std::min(r, c);
    for (int t = 0; t < tmax; ++t) {
        // Smallest-absolute-value nonzero pivot in the trailing block,
        // lexicographic tie-break. Deterministic.
        int pi = -1, pj = -1;
        Int best;
        for (int i = t; i < r; ++i)
            for (int j = t; j < c; ++j) {
                const Int& x = w.D.at(i, j);
                if (x == 0) continue;
                Int ax = abs(x);
                if (pi < 0 || ax < best) { best = ax; pi = i; pj = j; }
            }
        if (pi < 0) break; // trailing block is zero
        w.row_swap(t, pi);
        w.col_swap(t, pj);

        for (;;) {
            bool touched = false;
            for (int i = t + 1; i < r; ++i)
                if (w.D.at(i, t) != 0)
                    w.row_sub(i, t, round_div(w.D.at(i, t), w.D.at(t, t)));
            int mi = -1;
            Int mbest;
            for (int i = t + 1; i < r; ++i) {
                const Int& x = w.D.at(i, t);
                if (x == 0) continue;
                Int ax = abs(x);
                if (mi < 0 || ax < mbest) { mbest = ax; mi = i; }
            }
            if (mi >= 0) { w.row_swap(t, mi); continue; }

            for (int j = t + 1; j < c; ++j)
                if (w.D.at(t, j) != 0)
                    w.col_sub(j, t, round_div(w.D.at(t, j), w.D.at(t, t)));
            int mj = -1;
            for (int j = t + 1; j < c; ++j) {
                const Int& x = w.D.at(t, j);
                if (x == 0) continue;
                Int ax = abs(x);
                if (mj < 0 || ax < mbest) { mbest = ax; mj = j; }
            }
            if (mj >= 0) { w.col_swap(t, mj); continue; }
            // Column ops above may have refilled the pivot column only via
            // column t itself, which they do not touch, so both are clear now.

            // Divisibility: pivot must divide the whole trailing block.
            for (int i = t + 1; i < r && !touched; ++i)
                for (int j = t + 1; j < c && !touched; ++j)
                    if (!mpz_divisible_p(w.D.at(i, j).get_mpz_t(), w.D.at(t, t).get_mpz_t())) {
                        // Pull the offending row alongside the pivot and redo.
                        for (int jj = 0; jj < c; ++jj) w.D.at(t, jj) += w.D.at(i, jj);
                        for (int jj = 0; jj < r; ++jj) w.U.at(t, jj) += w.U.at(i, jj);
                        touched = true;
                    }
            if (!touched) break;
        }
        if (w.D.at(t, t) < 0) w.row_neg(t);
    }
    return SmithForm{w.U, w.D, w.V};
}

std::vector<Int> SmithForm::invariant_factors() const {
    std::vector<Int> f;
    int tmax = std::min(D.rows(), D.cols());
    for (int t = 0; t < tmax; ++t)
        if (D.at(t, t) != 0) f.push_back(D.at(t, t));
    return f;
}

bool is_complete(const IntMat& v) {
    int k = v.rows(), n = v.cols();
    if (k > n) throw DimensionError("is_complete: more dimensions than vectors (k > n)");
    auto f = smith_normal_form(v).invariant_factors();
    if (static_cast<int>(f.size()) != k) return false;
    for (const Int& d : f)
        if (d != 1) return false;
    return true;
}

ModMat::ModMat(int rows, int cols, std::int64_t p)
    : rows_(rows), cols_(cols), p_(p), a_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw InvalidOpError("ModMat: modulus " + std::to_string(p) + " is not prime");
}

ModMat ModMat::identity(int n, std::int64_t p) {
    ModMat m(n, n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::string ModMat::encode() const {
    std::string s;
    s.reserve(a_.size() * 3);
    for (std::int64_t x : a_) {
        s += std::to_string(x);
        s += ',';
    }
    return s;
}

namespace {
std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    // Fermat; p prime, a != 0 mod p.
    std::int64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = static_cast<std::int64_t>(static_cast<unsigned __int128>(r) * b % p);
        b = static_cast<std::int64_t>(static_cast<unsigned __int128>(b) * b % p);
        e >>= 1;
    }
    return r;
}
} // namespace

int ModMat::rank() const {
    ModMat m = *this;
    int rank = 0;
    for (int c = 0; c < cols_ && rank < rows_; ++c) {
        int piv = -1;
        for (int i = rank; i < rows_; ++i)
            if (m.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (int j = 0; j < cols_; ++j) std::swap(m.at(rank, j), m.at(piv, j));
        std::int64_t inv = inv_mod(m.at(rank, c), p_);
        for (int j = 0; j < cols_; ++j)
            m.at(rank, j) = static_cast<std::int64_t>(
                static_cast<unsigned __int128>(m.at(rank, j)) * inv % p_);
        for (int i = 0; i < rows_; ++i) {
            if (i == rank || m.at(i, c) == 0) continue;
            std::int64_t f = m.at(i, c);
            for (int j = 0; j < cols_; ++j) {
                std::int64_t sub = static_cast<std::int64_t>(
                    static_cast<unsigned __int128>(f) * m.at(rank, j) % p_);
                m.at(i, j) = (m.at(i, j) - sub % p_ + p_) % p_;
            }
        }
        ++rank;
    }
    return rank;
}

ModMat mul(const ModMat& a, const ModMat& b) {
    if (a.cols() != b.rows() || a.modulus() != b.modulus())
        throw DimensionError("mul(ModMat): incompatible operands");
    std::int64_t p = a.modulus();
    ModMat c(a.rows(), b.cols(), p);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            std::int64_t aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) {
                unsigned __int128 t = static_cast<unsigned __int128>(aik) * b.at(k, j) + c.at(i, j);
                c.at(i, j) = static_cast<std::int64_t>(t % p);
            }
        }
    return c;
}

ModMat reduce_mod_p(const IntMat& a, std::int64_t p) {
    ModMat m(a.rows(), a.cols(), p);
    Int r;
    Int pz(static_cast<long>(p));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            mpz_fdiv_r(r.get_mpz_t(), a.at(i, j).get_mpz_t(), pz.get_mpz_t());
            m.at(i, j) = r.get_si();
        }
    return m;
}

ElemTransvection::ElemTransvection(int n_, int i_, int j_, Int m_)
    : n(n_), i(i_), j(j_), m(std::move(m_)) {
    if (n < 2 || i < 1 || j < 1 || i > n || j > n)
        throw InvalidOpError("ElemTransvection: index out of range");
    if (i == j) throw InvalidOpError("ElemTransvection: i == j");
}

GenTransvection::GenTransvection(int n_, std::vector<int> I_, std::vector<int> J_, IntMat alpha_)
    : n(n_), I(std::move(I_)), J(std::move(J_)), alpha(std::move(alpha_)) {
    auto check = [&](const std::vector<int>& s, const char* name) {
        for (size_t t = 0; t < s.size(); ++t) {
            if (s[t] < 1 || s[t] > n)
                throw InvalidOpError(std::string("GenTransvection: ") + name + " index out of range");
            if (t > 0 && s[t] <= s[t - 1])
                throw InvalidOpError(std::string("GenTransvection: ") + name + " not strictly increasing");
        }
    };
    check(I, "I");
    check(J, "J");
    size_t a = 0, b = 0;
    while (a < I.size() && b < J.size()) {
        if (I[a] == J[b]) throw InvalidOpError("GenTransvection: I and J overlap");
        if (I[a] < J[b]) ++a; else ++b;
    }
    if (alpha.rows() != static_cast<int>(I.size()) || alpha.cols() != static_cast<int>(J.size()))
        throw InvalidOpError("GenTransvection: alpha must be |I| x |J|");
}

IntMat to_matrix(const ElemTransvection& t) {
    IntMat m = IntMat::identity(t.n);
    m.at(t.i - 1, t.j - 1) = t.m;
    return m;
}

IntMat to_matrix(const GenTransvection& t) {
    IntMat m = IntMat::identity(t.n);
    for (size_t a = 0; a < t.I.size(); ++a)
        for (size_t b = 0; b < t.J.size(); ++b)
            m.at(t.J[b] - 1, t.I[a] - 1) = t.alpha.at(static_cast<int>(a), static_cast<int>(b));
    return m;
}

} // namespace slnz
