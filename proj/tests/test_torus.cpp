#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "slnz/torus.hpp"

using namespace slnz;

namespace {

QPoint pt2(long xn, long xd, long yn, long yd) {
    return QPoint::of({Rat(xn, xd), Rat(yn, yd)});
}

IntMat sl2(long a, long b, long c, long d) {
    IntMat m(2, 2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
}

} // namespace

TEST_CASE("torus normalization into (-1/2, 1/2]") {
    CHECK(torus_normalize(Rat(1, 2)) == Rat(1, 2));
    CHECK(torus_normalize(Rat(-1, 2)) == Rat(1, 2));
    CHECK(torus_normalize(Rat(3, 4)) == Rat(-1, 4));
    CHECK(torus_normalize(Rat(0)) == Rat(0));
    CHECK(torus_normalize(Rat(7, 2)) == Rat(1, 2));
    CHECK(torus_normalize(Rat(-13, 8)) == Rat(3, 8));
}

TEST_CASE("act_sl2 pinned examples") {
    // g12+ : (x, y) -> (x + y, y)
    QPoint a = act(sl2(1, 1, 0, 1), pt2(0, 1, 1, 4));
    CHECK(a == pt2(1, 4, 1, 4));
    // g21- : (x, y) -> (x, y - x) at the seam point (1/2, 1/2)
    QPoint b = act(sl2(1, 0, -1, 1), pt2(1, 2, 1, 2));
    CHECK(b == pt2(1, 2, 0, 1));
}

TEST_CASE("action inverse round trip on random rational points") {
    std::mt19937_64 rng(314159);
    IntMat g = sl2(1, 1, 0, 1), ginv = sl2(1, -1, 0, 1);
    for (int t = 0; t < 10000; ++t) {
        long d = 1 + static_cast<long>(rng() % 97);
        QPoint p = pt2(static_cast<long>(rng() % 211) - 105, d,
                       static_cast<long>(rng() % 211) - 105, d);
        REQUIRE(act(ginv, act(g, p)) == p);
    }
}

TEST_CASE("grid preservation: the action permutes every (1/Q)-grid") {
    for (long Q = 2; Q <= 64; ++Q) {
        IntMat g = sl2(1, 0, 1, 1);
        std::set<std::pair<Rat, Rat>> images;
        long lo = -(Q / 2) + ((Q % 2 == 0) ? 1 : 0), hi = Q / 2;
        long count = 0;
        for (long i = lo; i <= hi; ++i)
            for (long j = lo; j <= hi; ++j) {
                QPoint p = pt2(i, Q, j, Q);
                QPoint im = act(g, p);
                images.insert({im.x[0], im.x[1]});
                ++count;
            }
        REQUIRE(static_cast<long>(images.size()) == count);
    }
}

TEST_CASE("classify pinned points") {
    CHECK(classify_T2(QPoint::of({Rat(0), Rat(0)})) == TorusLabel::Origin);
    CHECK(classify_T2(pt2(3, 8, 0, 1)) == TorusLabel::BandX);
    CHECK(classify_T2(pt2(1, 8, 1, 16)) == TorusLabel::A2); // below the diagonal
    CHECK(classify_T2(pt2(1, 16, 1, 8)) == TorusLabel::A1);
    CHECK(classify_T2(pt2(5, 16, 1, 8)) == TorusLabel::A1p);
    CHECK(std::string(label_name(classify_T2(pt2(1, 8, 1, 16)))) == "A2");
}

TEST_CASE("A sets are antipodally symmetric") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20000; ++t) {
        long Q = 64;
        QPoint p = pt2(static_cast<long>(rng() % 64) - 31, Q,
                       static_cast<long>(rng() % 64) - 31, Q);
        QPoint m = QPoint::of({-p.x[0], -p.x[1]});
        for (int i = 1; i <= 4; ++i) {
            REQUIRE(in_A(i, p) == in_A(i, m));
            REQUIRE(in_Aprime(i, p) == in_Aprime(i, m));
        }
    }
}

TEST_CASE("partition is exact on grids") {
    for (long Q : {4L, 16L, 64L, 512L}) {
        auto rep = check_partition(Q);
        CHECK(rep.points == Q * Q);
        CHECK(rep.violations == 0);
    }
}

TEST_CASE("the four mapping identities hold exactly on grids") {
    for (long Q : {4L, 64L, 512L}) {
        auto reps = check_mapping_identities(Q);
        REQUIRE(reps.size() == 4);
        for (const auto& r : reps) {
            INFO(r.name << " at Q=" << Q);
            CHECK(r.violations == 0);
        }
    }
}

TEST_CASE("negative control: g12+ does not fix A1") {
    CHECK(negative_control_violations(64) > 0);
}

TEST_CASE("B/C coordinate sets in T^p") {
    SUBCASE("pinned mapping: (0,0,1/8) under g13") {
        IntMat g = IntMat::identity(3);
        g.at(0, 2) = 1;
        QPoint y = QPoint::of({Rat(0), Rat(0), Rat(1, 8)});
        QPoint img = act(g, y);
        CHECK(img == QPoint::of({Rat(1, 8), Rat(0), Rat(1, 8)}));
    }
    SUBCASE("exhaustive checks") {
        auto rep3 = check_Bp_Cp(3, 8);
        CHECK(rep3.points == 512);
        CHECK(rep3.total() == 0);
        auto rep4 = check_Bp_Cp(4, 4);
        CHECK(rep4.points == 256);
        CHECK(rep4.total() == 0);
        auto rep5 = check_Bp_Cp(5, 4);
        CHECK(rep5.total() == 0);
    }
    SUBCASE("size guard") {
        CHECK_THROWS_AS(check_Bp_Cp(5, 64), SizeError);
    }
}

TEST_CASE("partition table enumerates every label") {
    auto table = partition_table();
    CHECK(table.size() == 12);
    CHECK(table[0].first == "Origin");
}
