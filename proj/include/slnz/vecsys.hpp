#ifndef SLNZ_VECSYS_HPP
#define SLNZ_VECSYS_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "slnz/intmat.hpp"

namespace slnz {

enum class Ring { Z, Fp };
enum class ReducePolicy { Z3k, Z2k1, Fp2k };

const char* policy_name(ReducePolicy p);

// A complete system of n vectors in Z^k (or F_p^k): vector j is row j of an
// n x k matrix, and generalized elementary operations act by left
// multiplication. Completeness (the vectors generate the whole module) is
// verified at construction.
struct VectorSystem {
    int k = 0, n = 0;
    Ring ring = Ring::Z;
    std::int64_t p = 0; // modulus when ring == Fp
    IntMat mat;         // n x k, row j = vector v_{j+1}

    VectorSystem() = default;

    // rows: n x k matrix, row j = vector j.
    static VectorSystem from_rows(IntMat rows, Ring ring = Ring::Z, std::int64_t p = 0);
    // cols: k x n matrix, column j = vector j (the interchange layout).
    static VectorSystem from_columns(const IntMat& cols, Ring ring = Ring::Z, std::int64_t p = 0);

    static VectorSystem standard(int k, int n, Ring ring = Ring::Z, std::int64_t p = 0);

    bool is_standard() const;
    std::vector<Int> vec(int pos1) const; // 1-based position
};

bool rows_generate_all(const IntMat& rows, Ring ring, std::int64_t p);

// One generalized elementary operation. Throws InvalidOpError on malformed
// ops; preserves completeness (the op matrix is unimodular).
VectorSystem apply_generalized(const VectorSystem& v, const GenTransvection& t);

// Smallest prime q = a (mod d) with q > lower and q not in distinct_from.
// Requires gcd(a, d) = 1 and d != 0; the scan is ascending and budgeted.
Int dirichlet_prime(const Int& a, const Int& d, const Int& lower,
                    const std::set<Int>& distinct_from);

// Square system W (k x k, rows = vectors): true iff the subgroup generated
// by the rows has squarefree index, i.e. the quotient is a product of
// pairwise distinct prime cyclic groups.
bool is_prime_system(const IntMat& w);

struct PrimeSystemResult {
    GenTransvection op;       // exactly one operation
    VectorSystem system;      // the transformed system
    std::vector<Int> primes;  // pairwise distinct, each > helper_det
    std::vector<int> block;   // 1-based positions of the prime block
    std::vector<int> helpers; // 1-based positions of the independent helper set
    Int helper_det;           // reference determinant bound
};

// One generalized operation making a designated block of k vectors generate
// a subgroup with squarefree index and prime factors above the helper-block
// determinant. Requires a complete system over Z with n >= 2k.
PrimeSystemResult make_prime_system(const VectorSystem& v);

struct ReductionTrace {
    ReducePolicy policy = ReducePolicy::Z3k;
    std::vector<GenTransvection> ops;
    VectorSystem final;

    int op_count() const { return static_cast<int>(ops.size()); }
};

// Transform a complete system to the standard one: op_count <= 4 for Z3k
// (n >= 3k), <= 5 for Z2k1 (n >= 2k+1), <= 3 for Fp2k (n >= 2k).
ReductionTrace reduce_to_standard(const VectorSystem& v, ReducePolicy policy);

// Replay soundness: applying trace.ops to input reproduces trace.final and
// every intermediate system is complete.
bool replay_trace(const VectorSystem& input, const ReductionTrace& trace);

// Test-input generator: a complete system with a unimodular core, small
// random fill rows and a random row permutation. Deterministic per seed.
VectorSystem random_complete_system(int k, int n, long max_entry, std::uint64_t seed,
                                    Ring ring = Ring::Z, std::int64_t p = 0);

} // namespace slnz

#endif
