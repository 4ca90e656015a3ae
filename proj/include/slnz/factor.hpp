#ifndef SLNZ_FACTOR_HPP
#define SLNZ_FACTOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slnz/intmat.hpp"
#include "slnz/vecsys.hpp"

namespace slnz {

enum class FactorKind { Generalized, Elementary };
enum class FactorSide { Left, Right };

// One factor of a bounded-generation certificate. Generalized factors come
// from the block peeling, elementary ones from the dimension-3 base case.
struct Factor {
    FactorKind kind = FactorKind::Elementary;
    FactorSide side = FactorSide::Left;
    int level = 0;
    GenTransvection gen;
    ElemTransvection elem;

    static Factor generalized(GenTransvection g, FactorSide side, int level);
    static Factor elementary(ElemTransvection e, int level);

    IntMat matrix() const;
};

// One +-1 generator step: the matrix I + sign*e_{ij}.
struct ElemStep {
    int i = 0, j = 0;
    int sign = 1;
};

struct FactorCertificate {
    int n = 0;
    ReducePolicy policy = ReducePolicy::Z3k;
    std::vector<Factor> factors; // left-to-right product equals the input
    int levels = 0;
    int generalized_count = 0;
    long base_elementary_count = 0;
    Int elementary_word_length;   // sum of |entry| over the expanded word
    size_t max_entry_bits = 0;    // largest entry seen across partial products
    std::string product_hash;
    bool verified = false;
};

struct BlockDecomposition {
    int n = 0, k = 0;
    std::vector<Factor> left; // at most 4 (Z3k) or 5 (Z2k1) generalized factors
    IntMat g_star;            // (n-k) x (n-k), determinant 1
    bool has_right = false;
    Factor right;             // the single right-hand factor, when nontrivial
    IntMat intermediate;      // product(left)^-1 * g: first k columns are (I; 0)
};

// g = left[0] * ... * left[m-1] * embed(g_star) * right, with g_star in the
// lower-right (n-k) x (n-k) corner. Requires det g = 1 and n >= 3k (Z3k
// policy) or n >= 2k+1 (Z2k1).
BlockDecomposition decompose_block(const IntMat& g, int k,
                                   ReducePolicy policy = ReducePolicy::Z3k);

// Elementary factor list for 3 x 3 (or any small) determinant-1 matrices by
// tracked Euclidean row elimination. Counts are reported, not bounded.
std::vector<Factor> base_case_sl3(const IntMat& g);

// Repeated peeling with k = floor(n/3) (or floor((n-1)/2) under Z2k1) until
// dimension 3, then the elementary base case.
FactorCertificate factor_full(const IntMat& g, ReducePolicy policy = ReducePolicy::Z3k);

// The E_n word of a certificate: each factor expands entrywise into |m|
// copies of a +-1 generator, row-major within each block. Word lengths grow
// with the certificate's entry sizes; expansion beyond max_steps throws
// SizeError instead of exhausting memory.
std::vector<ElemStep> expand_to_elementary(const FactorCertificate& cert,
                                           long max_steps = 10000000L);

IntMat word_product(const std::vector<ElemStep>& word, int n);

bool verify_certificate(const FactorCertificate& cert, const IntMat& g);

// Product of word_length uniformly chosen +-1 elementary generators under a
// seeded RNG; deterministic per seed.
IntMat random_sl(int n, int word_length, std::uint64_t seed);

std::string product_hash_of(const IntMat& m);

} // namespace slnz

#endif
