#include <doctest.h>

#include <random>

#include "slnz/numtheory.hpp"
#include "slnz/vecsys.hpp"

using namespace slnz;

namespace {

VectorSystem sys1d(std::initializer_list<long> vals) {
    IntMat rows(static_cast<int>(vals.size()), 1);
    int i = 0;
    for (long v : vals) rows.at(i++, 0) = v;
    return VectorSystem::from_rows(rows);
}

} // namespace

TEST_CASE("apply_generalized basics") {
    VectorSystem v = sys1d({6, 10, 15});
    SUBCASE("zero alpha leaves the system unchanged") {
        GenTransvection t(3, {2, 3}, {1}, IntMat(2, 1));
        CHECK(apply_generalized(v, t).mat == v.mat);
    }
    SUBCASE("adding v2 + v3 into v1 makes 31") {
        IntMat alpha(2, 1);
        alpha.at(0, 0) = 1;
        alpha.at(1, 0) = 1;
        GenTransvection t(3, {2, 3}, {1}, alpha);
        VectorSystem w = apply_generalized(v, t);
        CHECK(w.mat.at(0, 0) == 31);
        CHECK(w.mat.at(1, 0) == 10);
        CHECK(w.mat.at(2, 0) == 15);
        CHECK(is_prime_u64(31));
    }
}

TEST_CASE("apply_generalized preserves completeness on random pairs") {
    for (int trial = 0; trial < 1000; ++trial) {
        int k = 1 + static_cast<int>(trial % 4);
        int n = 3 * k + (trial % 3);
        VectorSystem v = random_complete_system(k, n, 50, 1000 + trial);
        std::mt19937_64 rng(trial);
        int a = 1 + static_cast<int>(rng() % n), b = 1 + static_cast<int>(rng() % n);
        if (a == b) b = (b % n) + 1;
        IntMat alpha(1, 1);
        alpha.at(0, 0) = static_cast<long>(rng() % 21) - 10;
        GenTransvection t(n, {std::min(a, b)}, {std::max(a, b)}, alpha);
        VectorSystem w = apply_generalized(v, t);
        REQUIRE(rows_generate_all(w.mat, w.ring, w.p));
        // vectors indexed by I unchanged
        REQUIRE(w.vec(std::min(a, b)) == v.vec(std::min(a, b)));
    }
}

TEST_CASE("dirichlet_prime") {
    CHECK(dirichlet_prime(1, 4, 10, {}) == 13);
    CHECK(dirichlet_prime(2, 3, 5, {Int(11)}) == 17);
    CHECK_THROWS_AS(dirichlet_prime(2, 4, 0, {}), InvalidOpError);
    // deterministic: smallest qualifying prime under the ascending scan
    CHECK(dirichlet_prime(1, 2, 2, {}) == 3);
    CHECK(dirichlet_prime(1, 2, 2, {Int(3), Int(5)}) == 7);
}

TEST_CASE("is_prime_system") {
    IntMat d35(2, 2);
    d35.at(0, 0) = 3;
    d35.at(1, 1) = 5;
    CHECK(is_prime_system(d35));

    IntMat d33(2, 2);
    d33.at(0, 0) = 3;
    d33.at(1, 1) = 3;
    CHECK_FALSE(is_prime_system(d33));

    IntMat w(2, 2);
    w.at(0, 0) = 101;
    w.at(0, 1) = 7;
    w.at(1, 1) = 103;
    CHECK(is_prime_system(w)); // det = 101 * 103, squarefree

    IntMat sing(2, 2);
    CHECK_FALSE(is_prime_system(sing)); // det 0

    IntMat unit(2, 2);
    unit.at(0, 0) = 1;
    unit.at(1, 1) = 1;
    CHECK(is_prime_system(unit)); // trivial quotient
}

TEST_CASE("make_prime_system: k=1 example (6,10,15) gives prime 31") {
    VectorSystem v = sys1d({6, 10, 15});
    auto res = make_prime_system(v);
    REQUIRE(res.primes.size() == 1);
    CHECK(res.primes[0] == 31); // helper (10), bound 11, progression 1 mod 5
    CHECK(res.block == std::vector<int>{1});
    CHECK(res.system.mat.at(0, 0) == 31);
    CHECK(res.system.mat.at(1, 0) == 10);
    CHECK(res.system.mat.at(2, 0) == 15);
}

TEST_CASE("make_prime_system: standard system k=2 n=6") {
    VectorSystem v = VectorSystem::standard(2, 6);
    auto res = make_prime_system(v);
    REQUIRE(res.primes.size() == 2);
    CHECK(res.primes[0] != res.primes[1]);
    for (const auto& q : res.primes) CHECK(q > res.helper_det);
    IntMat block(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) block.at(a, c) = res.system.mat.at(res.block[a] - 1, c);
    CHECK(is_prime_system(block));
}

TEST_CASE("make_prime_system: random systems pass checker and determinant bound") {
    for (int trial = 0; trial < 60; ++trial) {
        int k = 1 + (trial % 4);
        int n = 2 * k + (trial % 3);
        VectorSystem v = random_complete_system(k, n, 30, 555000 + trial);
        auto res = make_prime_system(v);
        IntMat block(k, k);
        for (int a = 0; a < k; ++a)
            for (int c = 0; c < k; ++c) block.at(a, c) = res.system.mat.at(res.block[a] - 1, c);
        REQUIRE(is_prime_system(block));
        Int prod = 1;
        for (const auto& q : res.primes) {
            REQUIRE(is_prime(q));
            REQUIRE(q > res.helper_det);
            prod *= q;
        }
        REQUIRE(abs(det_exact(block)) == prod);
        // untouched positions
        for (int i = 1; i <= n; ++i) {
            bool in_block = false;
            for (int b : res.block) in_block |= (b == i);
            if (!in_block) REQUIRE(res.system.vec(i) == v.vec(i));
        }
    }
}

TEST_CASE("reduce_to_standard: pinned small cases") {
    SUBCASE("standard system needs zero operations") {
        auto tr = reduce_to_standard(VectorSystem::standard(2, 6), ReducePolicy::Z3k);
        CHECK(tr.op_count() == 0);
    }
    SUBCASE("k=1 (6,10,15) reduces in at most 3 ops to (1,0,0)") {
        VectorSystem v = sys1d({6, 10, 15});
        auto tr = reduce_to_standard(v, ReducePolicy::Z3k);
        CHECK(tr.op_count() <= 3);
        CHECK(tr.final.is_standard());
        CHECK(replay_trace(v, tr));
    }
    SUBCASE("k=1 degenerate (-1,0,0)") {
        VectorSystem v = sys1d({-1, 0, 0});
        auto tr = reduce_to_standard(v, ReducePolicy::Z3k);
        CHECK(tr.op_count() <= 3);
        CHECK(tr.final.is_standard());
        CHECK(replay_trace(v, tr));
    }
    SUBCASE("k=1 with a unit buried in the tail") {
        VectorSystem v = sys1d({0, 1, 0});
        auto tr = reduce_to_standard(v, ReducePolicy::Z3k);
        CHECK(tr.op_count() <= 3);
        CHECK(tr.final.is_standard());
        CHECK(replay_trace(v, tr));
    }
    SUBCASE("policy preconditions") {
        CHECK_THROWS_AS(reduce_to_standard(VectorSystem::standard(2, 5), ReducePolicy::Z3k),
                        PolicyError);
        CHECK_THROWS_AS(reduce_to_standard(VectorSystem::standard(2, 4), ReducePolicy::Z2k1),
                        PolicyError);
        CHECK_THROWS_AS(reduce_to_standard(VectorSystem::standard(2, 6), ReducePolicy::Fp2k),
                        PolicyError);
    }
}

TEST_CASE("reduce_to_standard: op-count bounds and replay across policies") {
    SUBCASE("Z-3k: at most 4 ops") {
        for (int trial = 0; trial < 120; ++trial) {
            int k = 1 + (trial % 6);
            int n = 3 * k + (trial % 3);
            VectorSystem v = random_complete_system(k, n, 1000, 91000 + trial);
            auto tr = reduce_to_standard(v, ReducePolicy::Z3k);
            REQUIRE(tr.op_count() <= 4);
            REQUIRE(tr.final.is_standard());
            REQUIRE(replay_trace(v, tr));
        }
    }
    SUBCASE("Z-2k1: at most 5 ops") {
        for (int trial = 0; trial < 120; ++trial) {
            int k = 1 + (trial % 6);
            int n = 2 * k + 1 + (trial % 3);
            VectorSystem v = random_complete_system(k, n, 1000, 92000 + trial);
            auto tr = reduce_to_standard(v, ReducePolicy::Z2k1);
            REQUIRE(tr.op_count() <= 5);
            REQUIRE(tr.final.is_standard());
            REQUIRE(replay_trace(v, tr));
        }
    }
    SUBCASE("Fp-2k: at most 3 ops, no primality involved") {
        const std::int64_t ps[] = {2, 3, 5, 7};
        for (int trial = 0; trial < 120; ++trial) {
            int k = 1 + (trial % 6);
            int n = 2 * k + (trial % 3);
            std::int64_t p = ps[trial % 4];
            VectorSystem v = random_complete_system(k, n, 0, 93000 + trial, Ring::Fp, p);
            auto tr = reduce_to_standard(v, ReducePolicy::Fp2k);
            REQUIRE(tr.op_count() <= 3);
            REQUIRE(tr.final.is_standard());
            REQUIRE(replay_trace(v, tr));
        }
    }
}

TEST_CASE("random_complete_system determinism and bounds") {
    VectorSystem a = random_complete_system(3, 9, 1000, 7);
    VectorSystem b = random_complete_system(3, 9, 1000, 7);
    CHECK(a.mat == b.mat);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.k; ++j) CHECK(abs(a.mat.at(i, j)) <= 1000);
}
