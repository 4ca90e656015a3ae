#include <doctest.h>

#include <cmath>

#include "slnz/constants.hpp"

using namespace slnz;
using doctest::Approx;

TEST_CASE("relative constants l(p) and k(n)") {
    CHECK(rel_const_l(2) == Approx(std::sqrt(27.0) + 3.0).epsilon(1e-14));
    CHECK(rel_const_l(2) == Approx(8.196152422706632).epsilon(1e-12));
    CHECK(rel_const_l(11) == Approx(9.0).epsilon(1e-14)); // sqrt(36) + 3
    CHECK_THROWS_AS(rel_const_l(1), PolicyError);

    CHECK(rel_const_k(4) == Approx(std::sqrt(70.0) + 6.0).epsilon(1e-14));
    CHECK(rel_const_k(8) == Approx(std::sqrt(80.0) + 6.0).epsilon(1e-14));
    CHECK_THROWS_AS(rel_const_k(3), PolicyError);

    // asymptotics: l(p)/sqrt(p) -> 1
    CHECK(rel_const_l(1000000000000L) / std::sqrt(1e12) == Approx(1.0).epsilon(1e-5));

    // 10*k(n) equals sqrt(250n + 6000) + 60 identically (exact surds)
    for (long n : {4L, 7L, 100L, 12345L}) {
        SurdSum lhs = SurdSum::sqrt_of(10 * n + 240, 5) + SurdSum(60);
        SurdSum rhs = SurdSum::sqrt_of(250 * n + 6000) + SurdSum(60);
        CHECK(lhs == rhs);
        CHECK(10.0 * rel_const_k(n) == Approx(std::sqrt(250.0 * n + 6000.0) + 60.0).epsilon(1e-13));
    }
}

TEST_CASE("h table: pinned values and bounds") {
    HTable t(2000);
    CHECK(t.at(3) == Approx(1416.0).epsilon(1e-14));       // 33*9 - 33 + 1152
    CHECK(t.at(5) == Approx(1922.0).epsilon(1e-14));       // quadratic base
    // H(7) = H(5) + 10 k(7) = 1922 + 60 + 10 sqrt(77.5)
    CHECK(t.at(7) == Approx(1982.0 + 10.0 * std::sqrt(77.5)).epsilon(1e-13));
    CHECK(t.at(7) == Approx(2070.0340843083).epsilon(1e-10));
    CHECK(t.at(7) < 2692.0); // tighter than the quadratic base at 7

    SUBCASE("exact reconstruction matches the double path") {
        for (long n : {3L, 7L, 50L, 777L, 2000L}) {
            auto [lo, hi] = t.exact_at(n).enclosure(64);
            double mid = (lo.get_d() + hi.get_d()) / 2;
            CHECK(t.at(n) == Approx(mid).epsilon(1e-10));
        }
    }
    SUBCASE("never exceeds the quadratic base nor the closed form") {
        for (long n = 3; n <= 2000; ++n) {
            REQUIRE(t.at(n) <= h_quadratic_base(n) + 1e-9);
            REQUIRE(t.at(n) <= h_closed_form(n));
            // generous margin: no comparison is decided within 1e-9 relative
            REQUIRE(h_closed_form(n) - t.at(n) > 1e-9 * h_closed_form(n));
        }
    }
}

TEST_CASE("recursion closed form") {
    RecursionParams p = displacement_recursion_params();
    p.validate();
    CHECK(p.n0_tilde() == Approx(4.0).epsilon(1e-12));

    SUBCASE("A equals 15 sqrt(10) + 10 sqrt(15) exactly") {
        double expect = 15.0 * std::sqrt(10.0) + 10.0 * std::sqrt(15.0);
        CHECK(p.A() == Approx(expect).epsilon(1e-12));
        // surd identity: sqrt(250)/(1 - sqrt(2/3)) = 5 sqrt(10) (3 + sqrt(6)) / 3 * 3
        SurdSum lhs = SurdSum::sqrt_of(10, 5) * (SurdSum(3) + SurdSum::sqrt_of(6));
        SurdSum rhs = SurdSum::sqrt_of(10, 15) + SurdSum::sqrt_of(15, 10);
        CHECK(lhs == rhs);
    }
    SUBCASE("the instantiated B value 675(2+sqrt 6) satisfies its defining identity") {
        // (2 + sqrt 6)(sqrt 150 - 10) = 10 exactly, hence
        // 6750 / (sqrt(150) (1 - sqrt(2/3))) = 675 (2 + sqrt 6).
        SurdSum prod = (SurdSum(2) + SurdSum::sqrt_of(6)) * (SurdSum::sqrt_of(150) - SurdSum(10));
        CHECK(prod == SurdSum(10));
        CHECK(675.0 * (2.0 + std::sqrt(6.0)) == Approx(3003.405576378645).epsilon(1e-12));
    }
    SUBCASE("closed form dominates the iteration oracle") {
        const long N = 5000;
        auto oracle = recursion_iterate_oracle(p, N);
        for (long n = p.n0; n <= N; ++n) {
            double cf = recursion_closed_form(p, n);
            REQUIRE(cf >= oracle[n]);
            REQUIRE(cf - oracle[n] > 1e-9 * cf);
        }
    }
    SUBCASE("parameter validation") {
        RecursionParams bad = p;
        bad.n0 = 2; // needs n0 > 1/(1-2/3) = 3
        CHECK_THROWS_AS(bad.validate(), PolicyError);
    }
}

TEST_CASE("kazhdan bounds") {
    HTable t(200);
    SUBCASE("pinned values") {
        auto kb = kazhdan_bounds(100, t);
        CHECK(kb.lower_Aprime == Approx(1.0 / 1280.0).epsilon(1e-14));
        CHECK(kb.lower_Aprime == Approx(7.8125e-4).epsilon(1e-14));
        auto kb3 = kazhdan_bounds(3, t);
        CHECK(kb3.upper == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
        CHECK(kb3.upper == Approx(0.816496580927726).epsilon(1e-12));
    }
    SUBCASE("sanity: lower bounds below the upper bound, h_dp <= h_closed") {
        for (long n = 3; n <= 200; ++n) {
            auto kb = kazhdan_bounds(n, t);
            REQUIRE(kb.lower_A <= kb.upper);
            REQUIRE(kb.lower_Aprime <= kb.upper);
            REQUIRE(kb.lower_Adoubleprime <= kb.upper);
            REQUIRE(kb.sqrt2_over_h_dp >= kb.sqrt2_over_h_closed);
            REQUIRE(kb.sqrt2_over_h_closed >= kb.lower_A);
        }
    }
}

TEST_CASE("application bounds") {
    auto ab = application_bounds(3, 2);
    CHECK(ab.kazhdan_used == Approx(1.0 / (31.0 * std::sqrt(3.0) + 700.0)).epsilon(1e-14));
    CHECK(ab.spectral_lower == Approx(4.401e-7).epsilon(1e-3));
    CHECK(ab.spectral_lower == Approx(ab.kazhdan_used * ab.kazhdan_used / 4.0).epsilon(1e-14));
    CHECK(application_bounds(5, std::nullopt).spectral_upper == Approx(0.2).epsilon(1e-14));

    SUBCASE("mixing bound uses the inverse gap") {
        auto m = application_bounds(3, 2);
        CHECK(m.mixing_bound == Approx(m.log_group_size / m.spectral_lower).epsilon(1e-12));
        CHECK(m.mixing_bound_literal == Approx(m.spectral_lower * m.log_group_size).epsilon(1e-12));
        CHECK(m.mixing_bound > m.mixing_bound_literal);
    }
    SUBCASE("product-replacement bound scales like n^2 log|Gamma| up to constants") {
        double g = 1000.0; // fixed log|Gamma|
        auto big = application_bounds(100000000, std::nullopt, g);
        double n = 1e8;
        double ratio = big.pra_bound / (n * n * g);
        CHECK(ratio > 4096.0);
        CHECK(ratio < 4200.0);
    }
    SUBCASE("group order logarithm") {
        // |SL_3(F_2)| = 168, |SL_2(F_3)| = 24
        CHECK(log_order_sl_fp(3, 2) == Approx(std::log(168.0)).epsilon(1e-12));
        CHECK(log_order_sl_fp(2, 3) == Approx(std::log(24.0)).epsilon(1e-12));
    }
}

TEST_CASE("inequality chain R2") {
    auto rep = verify_chain_R2();
    for (const auto& c : rep.checks) {
        INFO(c.name);
        CHECK(c.pass);
    }
    CHECK(rep.violations == 0);
    CHECK(rep.all_pass());
}

TEST_CASE("inequality chains Rp and Rpq") {
    SUBCASE("pinned corner values") {
        // p=2: lhs ~ 43.49, rhs ~ 67.18
        double lhs = 2.0 + 6.0 * std::sqrt(2.0) + 33.0;
        double rhs = std::pow(std::sqrt(27.0) + 3.0, 2);
        CHECK(lhs == Approx(43.4852813742).epsilon(1e-9));
        CHECK(rhs == Approx(67.1769145362).epsilon(1e-9));
        CHECK(lhs < rhs);
        // p=q=2: lhs ~ 132.46, rhs ~ 206.39
        double l2 = 3.0 * 2 + 2.0 * 2 + 97.0 + 18.0 * std::sqrt(2.0);
        double r2 = std::pow(std::sqrt(70.0) + 6.0, 2);
        CHECK(l2 == Approx(132.4558441227).epsilon(1e-9));
        CHECK(r2 == Approx(206.3992031841).epsilon(1e-9));
        CHECK(l2 < r2);
    }
    SUBCASE("sweeps are violation-free") {
        CHECK(verify_chain_Rp(2000).all_pass());
        CHECK(verify_chain_Rpq(2000, 2000).all_pass());
    }
}

TEST_CASE("consistency report") {
    HTable t(5000);
    auto rep = consistency_report(3, 5000, t);
    REQUIRE(rep.flags.size() == 2);
    CHECK(rep.flags[0].id == "lowerA_50_vs_64");
    CHECK(rep.flags[1].id == "lowerAprime_33_317_vs_42_860");
    for (const auto& v : rep.verified) {
        INFO(v.name);
        CHECK(v.pass);
    }
    CHECK(rep.fp_remark_constant_n3 == Approx(1.0 / (24.0 * std::sqrt(3.0) + 100.0)).epsilon(1e-14));
}
