#ifndef SLNZ_INTMAT_HPP
#define SLNZ_INTMAT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "slnz/errors.hpp"

namespace slnz {

using Int = mpz_class;
using Rat = mpq_class;

// Dense matrix over Z with arbitrary-precision entries. All arithmetic is
// exact at any magnitude; values are immutable in spirit (operations return
// new matrices).
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
    }

    static IntMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMat& o) const { return !(*this == o); }

    bool is_square() const { return rows_ == cols_; }
    bool is_identity() const;
    bool is_zero() const;

    IntMat transpose() const;

    // Largest entry bit length (0 for the zero matrix); used for certificate
    // size reporting.
    size_t max_entry_bits() const;

    std::string to_text() const; // "rows cols" header + one line per row

private:
    int rows_, cols_;
    std::vector<Int> a_;
};

IntMat mul(const IntMat& a, const IntMat& b);
inline IntMat operator*(const IntMat& a, const IntMat& b) { return mul(a, b); }

// Exact determinant by fraction-free (Bareiss) elimination.
Int det_exact(const IntMat& a);

// Inverse of a matrix with determinant +-1. Throws NotUnimodularError otherwise.
IntMat inverse_unimodular(const IntMat& a);

// U*A*V = D with U, V unimodular and D diagonal, d1 | d2 | ... | dr,
// all diagonal entries nonnegative. Deterministic for fixed input.
struct SmithForm {
    IntMat U, D, V;
    std::vector<Int> invariant_factors() const; // nonzero diagonal entries, in order
};

SmithForm smith_normal_form(const IntMat& a);

// Vector-system completeness: the n columns of the k x n matrix generate Z^k,
// i.e. all k invariant factors equal 1. Requires k <= n.
bool is_complete(const IntMat& v);

// Matrix over F_p (p prime, checked at construction); entries reduced to [0, p).
class ModMat {
public:
    ModMat() : rows_(0), cols_(0), p_(0) {}
    ModMat(int rows, int cols, std::int64_t p);

    static ModMat identity(int n, std::int64_t p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::int64_t modulus() const { return p_; }

    std::int64_t& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    std::int64_t at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const ModMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_ && a_ == o.a_;
    }
    bool operator!=(const ModMat& o) const { return !(*this == o); }

    // Row-major entry key, collision-free for fixed (rows, cols, p).
    std::string encode() const;

    int rank() const; // Gaussian elimination over F_p

private:
    int rows_, cols_;
    std::int64_t p_;
    std::vector<std::int64_t> a_;
};

ModMat mul(const ModMat& a, const ModMat& b);
inline ModMat operator*(const ModMat& a, const ModMat& b) { return mul(a, b); }

ModMat reduce_mod_p(const IntMat& a, std::int64_t p);

// Elementary transvection: the matrix I + m*e_{ij}, i != j. Indices are
// 1-based to match the usual E_{ij} notation.
struct ElemTransvection {
    int n = 0;
    int i = 0, j = 0;
    Int m;

    ElemTransvection() = default;
    ElemTransvection(int n_, int i_, int j_, Int m_);
};

// Generalized elementary transvection E_{I,J,alpha}: adds alpha-combinations
// of the I-indexed vectors into the J-indexed vectors of a system. On a
// system stored as rows of an (n x k) matrix this is left multiplication by
// to_matrix(): the identity plus entry alpha(a,b) at row J[b], column I[a].
// Index sets are 1-based, sorted, disjoint; alpha is |I| x |J|.
struct GenTransvection {
    int n = 0;
    std::vector<int> I, J;
    IntMat alpha;

    GenTransvection() = default;
    GenTransvection(int n_, std::vector<int> I_, std::vector<int> J_, IntMat alpha_);

    bool is_noop() const { return alpha.is_zero(); }
};

IntMat to_matrix(const ElemTransvection& t);
IntMat to_matrix(const GenTransvection& t);

inline GenTransvection inverse(const GenTransvection& t) {
    GenTransvection r = t;
    for (int a = 0; a < r.alpha.rows(); ++a)
        for (int b = 0; b < r.alpha.cols(); ++b)
            r.alpha.at(a, b) = -r.alpha.at(a, b);
    return r;
}

inline ElemTransvection inverse(const ElemTransvection& t) {
    return ElemTransvection(t.n, t.i, t.j, -t.m);
}

} // namespace slnz

#endif
