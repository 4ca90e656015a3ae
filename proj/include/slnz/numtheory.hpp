#ifndef SLNZ_NUMTHEORY_HPP
#define SLNZ_NUMTHEORY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace slnz {

// Deterministic Miller-Rabin for 64-bit inputs (fixed witness set, proven
// complete below 2^64).
bool is_prime_u64(std::uint64_t n);

// Primality with a deterministic answer for |n| < 2^64 and a fixed-round
// probabilistic test above (error < 2^-128).
bool is_prime(const mpz_class& n);

// Full factorization by trial division plus Pollard rho. Intended for the
// moderate sizes that appear in certificates and prime-system checks.
std::vector<mpz_class> factorize(mpz_class n);

// |n| is squarefree (n != 0). Uses factorize.
bool is_squarefree(const mpz_class& n);

} // namespace slnz

#endif
