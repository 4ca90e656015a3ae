#include "slnz/numtheory.hpp"

#include <algorithm>

namespace slnz {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin_u64(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // This witness set is deterministic for all n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin_u64(n, a)) return false;
    return true;
}

bool is_prime(const mpz_class& n) {
    if (n <= 1) return false;
    if (n.fits_ulong_p() && sizeof(unsigned long) == 8)
        return is_prime_u64(n.get_ui());
    // 64 rounds: error probability below 4^-64 = 2^-128.
    return mpz_probab_prime_p(n.get_mpz_t(), 64) > 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
    // n odd composite, no small factors. Brent's cycle variant.
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return r;
    }
    for (unsigned long c = 1;; ++c) {
        mpz_class x = 2, y = 2, d = 1;
        mpz_class diff;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            diff = x - y;
            if (diff == 0) break; // cycle without factor; retry with next c
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(mpz_class n, std::vector<mpz_class>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

std::vector<mpz_class> factorize(mpz_class n) {
    std::vector<mpz_class> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (unsigned long p = 2; p < 100000 && mpz_class(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.emplace_back(p);
            n /= static_cast<long>(p);
        }
    }
    factor_rec(n, out);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_squarefree(const mpz_class& n) {
    if (n == 0) return false;
    auto f = factorize(n);
    for (size_t i = 1; i < f.size(); ++i)
        if (f[i] == f[i - 1]) return false;
    return true;
}

} // namespace slnz
