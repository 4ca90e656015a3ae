#include "slnz/surd.hpp"

#include <sstream>

#include "slnz/errors.hpp"
#include "slnz/numtheory.hpp"

namespace slnz {

namespace {

// m = s^2 * k with k squarefree; returns (s, k). Pairs equal factors off the
// sorted factor list. Radicands here stay small (inequality parameters), so
// factorization is cheap.
std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& m) {
    mpz_class s = 1, k = 1;
    auto fs = factorize(m);
    for (size_t i = 0; i < fs.size();) {
        if (i + 1 < fs.size() && fs[i] == fs[i + 1]) {
            s *= fs[i];
            i += 2;
        } else {
            k *= fs[i];
            i += 1;
        }
    }
    return {s, k};
}

} // namespace

std::pair<mpq_class, mpq_class> sqrt_enclosure(const mpz_class& m, unsigned bits) {
    if (m < 0) throw Error("sqrt_enclosure: negative radicand");
    mpz_class scaled = m << (2 * bits);
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    mpz_class den = mpz_class(1) << bits;
    mpq_class lo(root, den), hi(root + 1, den);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

SurdSum SurdSum::sqrt_of(const mpz_class& m, const mpq_class& coeff) {
    if (m < 0) throw Error("SurdSum: negative radicand");
    SurdSum s;
    s.add_term(coeff, m);
    return s;
}

void SurdSum::add_term(mpq_class coeff, mpz_class radicand) {
    if (coeff == 0) return;
    if (radicand == 0) return; // coeff * sqrt(0) == 0
    mpz_class mult = 1, core = 1;
    if (radicand != 1) {
        auto [s, k] = squarefree_split(radicand);
        mult = s;
        core = k;
    }
    mpq_class c = coeff * mpq_class(mult);
    auto it = terms_.find(core);
    if (it == terms_.end()) {
        terms_.emplace(core, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SurdSum SurdSum::operator+(const SurdSum& o) const {
    SurdSum r = *this;
    for (const auto& [m, c] : o.terms_) {
        auto it = r.terms_.find(m);
        if (it == r.terms_.end()) {
            r.terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

SurdSum SurdSum::operator-() const {
    SurdSum r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

SurdSum SurdSum::operator-(const SurdSum& o) const { return *this + (-o); }

SurdSum SurdSum::operator*(const SurdSum& o) const {
    SurdSum r;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_)
            r.add_term(c1 * c2, m1 * m2); // sqrt(m1)*sqrt(m2) = sqrt(m1*m2)
    return r;
}

std::pair<mpq_class, mpq_class> SurdSum::enclosure(unsigned bits) const {
    mpq_class lo = 0, hi = 0;
    for (const auto& [m, c] : terms_) {
        if (m == 1) {
            lo += c;
            hi += c;
            continue;
        }
        auto [rl, rh] = sqrt_enclosure(m, bits);
        if (c >= 0) {
            lo += c * rl;
            hi += c * rh;
        } else {
            lo += c * rh;
            hi += c * rl;
        }
    }
    return {lo, hi};
}

int SurdSum::sign() const {
    if (terms_.empty()) return 0;
    // Distinct squarefree radicands are linearly independent over Q, so a
    // nonempty canonical form is nonzero; refine until the enclosure decides.
    for (unsigned bits = 32;; bits *= 2) {
        auto [lo, hi] = enclosure(bits);
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        if (bits > 4096)
            throw Error("SurdSum::sign: failed to separate from zero (internal)");
    }
}

double SurdSum::to_double() const {
    auto [lo, hi] = enclosure(64);
    return (lo.get_d() + hi.get_d()) / 2;
}

std::string SurdSum::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        if (m != 1) os << "*sqrt(" << m.get_str() << ")";
    }
    return os.str();
}

} // namespace slnz
