#include <doctest.h>

#include <cmath>

#include "slnz/factor.hpp"

using namespace slnz;

TEST_CASE("random_sl determinism and unimodularity") {
    CHECK(random_sl(4, 0, 1).is_identity());
    CHECK(random_sl(5, 40, 3) == random_sl(5, 40, 3));
    for (std::uint64_t s = 0; s < 100; ++s) CHECK(det_exact(random_sl(5, 40, s)) == 1);
}

TEST_CASE("decompose_block") {
    SUBCASE("identity") {
        auto dec = decompose_block(IntMat::identity(6), 2);
        CHECK(dec.left.empty());
        CHECK_FALSE(dec.has_right);
        CHECK(dec.g_star.is_identity());
    }
    SUBCASE("already embedded in the lower-right corner") {
        IntMat g = IntMat::identity(6);
        // lower-right 4x4 nontrivial SL4 block
        IntMat inner = random_sl(4, 12, 17);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) g.at(2 + i, 2 + j) = inner.at(i, j);
        auto dec = decompose_block(g, 2);
        CHECK(dec.left.empty());
        CHECK_FALSE(dec.has_right);
        CHECK(dec.g_star == inner);
    }
    SUBCASE("random SL6 from a 20-letter word, k=2") {
        for (std::uint64_t s = 0; s < 30; ++s) {
            IntMat g = random_sl(6, 20, 1000 + s);
            auto dec = decompose_block(g, 2);
            // peeling correctness: first k columns of the intermediate
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 2; ++j)
                    REQUIRE(dec.intermediate.at(i, j) == (i == j ? 1 : 0));
            // reassemble
            IntMat prod = IntMat::identity(6);
            for (const auto& f : dec.left) prod = mul(prod, f.matrix());
            IntMat embedded = IntMat::identity(6);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) embedded.at(2 + i, 2 + j) = dec.g_star.at(i, j);
            prod = mul(prod, embedded);
            if (dec.has_right) prod = mul(prod, dec.right.matrix());
            REQUIRE(prod == g);
            REQUIRE(det_exact(dec.g_star) == 1);
            REQUIRE(static_cast<int>(dec.left.size()) <= 4);
        }
    }
    SUBCASE("errors") {
        IntMat notsl = IntMat::identity(6);
        notsl.at(0, 0) = 2;
        CHECK_THROWS_AS(decompose_block(notsl, 2), NotUnimodularError);
        CHECK_THROWS_AS(decompose_block(IntMat::identity(5), 2), PolicyError);
    }
}

TEST_CASE("base_case_sl3") {
    SUBCASE("identity gives the empty list") {
        CHECK(base_case_sl3(IntMat::identity(3)).empty());
    }
    SUBCASE("single transvection with m=3 has word length 3") {
        IntMat g = to_matrix(ElemTransvection(3, 2, 1, 3));
        auto fac = base_case_sl3(g);
        REQUIRE(fac.size() == 1);
        CHECK(fac[0].elem.m == 3);
        Int wl = 0;
        for (const auto& f : fac) wl += abs(f.elem.m);
        CHECK(wl == 3);
    }
    SUBCASE("products of random generators round-trip") {
        for (std::uint64_t s = 0; s < 50; ++s) {
            IntMat g = random_sl(3, 10, 2000 + s);
            auto fac = base_case_sl3(g);
            IntMat prod = IntMat::identity(3);
            for (const auto& f : fac) prod = mul(prod, f.matrix());
            REQUIRE(prod == g);
        }
    }
    SUBCASE("negative diagonal pairs are eliminated") {
        // diag(-1,-1,1) has determinant 1
        IntMat g(3, 3);
        g.at(0, 0) = -1;
        g.at(1, 1) = -1;
        g.at(2, 2) = 1;
        auto fac = base_case_sl3(g);
        IntMat prod = IntMat::identity(3);
        for (const auto& f : fac) prod = mul(prod, f.matrix());
        CHECK(prod == g);
    }
}

TEST_CASE("factor_full") {
    SUBCASE("identity in SL9 gives an empty certificate") {
        auto cert = factor_full(IntMat::identity(9));
        CHECK(cert.factors.empty());
        CHECK(cert.verified);
        CHECK(cert.generalized_count == 0);
        CHECK(cert.elementary_word_length == 0);
    }
    SUBCASE("single elementary with m=5 has word length 5") {
        auto cert = factor_full(to_matrix(ElemTransvection(9, 1, 2, 5)));
        CHECK(cert.verified);
        CHECK(cert.elementary_word_length == 5);
        auto word = expand_to_elementary(cert);
        CHECK(word.size() == 5);
        CHECK(word_product(word, 9) == to_matrix(ElemTransvection(9, 1, 2, 5)));
    }
    SUBCASE("level bound for n=9") {
        // peeling 9 -> 6 -> 4 -> 3: levels <= ceil(log_{1.5}(9/3)) = 3
        for (std::uint64_t s = 0; s < 10; ++s) {
            IntMat g = random_sl(9, 30, 3000 + s);
            auto cert = factor_full(g);
            REQUIRE(cert.verified);
            REQUIRE(verify_certificate(cert, g));
            int bound = static_cast<int>(std::ceil(std::log(9.0 / 3.0) / std::log(1.5)));
            REQUIRE(cert.levels <= bound);
            REQUIRE(cert.generalized_count <= 5 * bound + cert.base_elementary_count);
            REQUIRE(cert.generalized_count <= 5 * std::max(cert.levels, 1));
        }
    }
    SUBCASE("round trip across dimensions, default policy") {
        for (int n = 3; n <= 12; ++n) {
            for (std::uint64_t s = 0; s < 4; ++s) {
                IntMat g = random_sl(n, 25, 4000 + 17 * n + s);
                auto cert = factor_full(g);
                REQUIRE(cert.verified);
                REQUIRE(verify_certificate(cert, g));
                if (cert.elementary_word_length <= 100000) {
                    auto word = expand_to_elementary(cert);
                    REQUIRE(Int(static_cast<long>(word.size())) == cert.elementary_word_length);
                    REQUIRE(word_product(word, n) == g);
                }
            }
        }
    }
    SUBCASE("round trip under the 2k1 block schedule (small n; entries grow fast)") {
        for (int n = 3; n <= 7; ++n) {
            for (std::uint64_t s = 0; s < 3; ++s) {
                IntMat g = random_sl(n, 15, 4400 + 17 * n + s);
                auto cert = factor_full(g, ReducePolicy::Z2k1);
                REQUIRE(cert.verified);
                REQUIRE(verify_certificate(cert, g));
            }
        }
    }
    SUBCASE("expanded word multiplies back to the input") {
        IntMat g = random_sl(6, 18, 99);
        auto cert = factor_full(g);
        CHECK(word_product(expand_to_elementary(cert), 6) == g);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(factor_full(IntMat::identity(2)), PolicyError);
        IntMat notsl = IntMat::identity(4);
        notsl.at(3, 3) = -1;
        CHECK_THROWS_AS(factor_full(notsl), NotUnimodularError);
    }
}

TEST_CASE("verify_certificate detects tampering") {
    IntMat g = random_sl(6, 15, 5);
    auto cert = factor_full(g);
    REQUIRE(verify_certificate(cert, g));
    // tamper with one factor
    auto bad = cert;
    for (auto& f : bad.factors) {
        if (f.kind == FactorKind::Generalized) {
            f.gen.alpha.at(0, 0) += 1;
            break;
        }
        if (f.kind == FactorKind::Elementary) {
            f.elem.m += 1;
            break;
        }
    }
    CHECK_FALSE(verify_certificate(bad, g));
}

TEST_CASE("certificate replays under reduction mod p") {
    // The factorization is a homomorphism witness: reducing every factor
    // mod p reproduces the reduction of g.
    for (std::uint64_t s = 0; s < 10; ++s) {
        IntMat g = random_sl(6, 20, 7000 + s);
        auto cert = factor_full(g);
        const std::int64_t p = 5;
        ModMat prod = ModMat::identity(6, p);
        for (const auto& f : cert.factors) prod = mul(prod, reduce_mod_p(f.matrix(), p));
        REQUIRE(prod == reduce_mod_p(g, p));
    }
}

TEST_CASE("product hash is stable and input-sensitive") {
    IntMat g = random_sl(4, 10, 11);
    CHECK(product_hash_of(g) == product_hash_of(g));
    IntMat h = g;
    h.at(0, 0) += 1;
    CHECK(product_hash_of(g) != product_hash_of(h));
}
