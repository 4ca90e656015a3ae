#ifndef SLNZ_SURD_HPP
#define SLNZ_SURD_HPP

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>

namespace slnz {

// Exact arithmetic on expressions  sum_i c_i * sqrt(m_i)  with rational
// coefficients and nonnegative integer radicands. Terms are kept with
// squarefree radicands (sqrt(12) is stored as 2*sqrt(3)), so the expression
// is zero exactly when all coefficients vanish; nonzero signs are decided by
// rational interval refinement. This is what lets inequality chains be
// checked without any floating-point rounding.
class SurdSum {
public:
    SurdSum() = default;
    SurdSum(long v) { add_term(mpq_class(v), 1); }
    explicit SurdSum(const mpq_class& v) { add_term(v, 1); }

    static SurdSum sqrt_of(const mpz_class& m, const mpq_class& coeff = 1);

    void add_term(mpq_class coeff, mpz_class radicand);

    SurdSum operator+(const SurdSum& o) const;
    SurdSum operator-(const SurdSum& o) const;
    SurdSum operator*(const SurdSum& o) const;
    SurdSum operator-() const;

    bool is_zero() const { return terms_.empty(); }
    int sign() const; // -1, 0, +1; exact

    bool operator==(const SurdSum& o) const { return (*this - o).is_zero(); }
    bool operator<=(const SurdSum& o) const { return (o - *this).sign() >= 0; }
    bool operator<(const SurdSum& o) const { return (o - *this).sign() > 0; }

    // Rational enclosure [lo, hi] with width <= #terms * 2^-bits.
    std::pair<mpq_class, mpq_class> enclosure(unsigned bits) const;

    double to_double() const;
    std::string str() const;

private:
    // squarefree radicand -> coefficient (radicand 1 is the rational part)
    std::map<mpz_class, mpq_class> terms_;
};

// [lo, hi] rational bounds for sqrt(m) with hi - lo = 2^-bits.
std::pair<mpq_class, mpq_class> sqrt_enclosure(const mpz_class& m, unsigned bits);

} // namespace slnz

#endif
