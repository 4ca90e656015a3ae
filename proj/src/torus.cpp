#include "slnz/torus.hpp"

#include <cmath>
#include <functional>

namespace slnz {

Rat torus_normalize(const Rat& v) {
    // r = v - ceil(v - 1/2) lies in (-1/2, 1/2].
    Rat t = v - Rat(1, 2);
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    Rat r = v - Rat(c);
    r.canonicalize();
    return r;
}

QPoint QPoint::of(std::vector<Rat> coords) {
    QPoint p;
    p.x.reserve(coords.size());
    for (auto& c : coords) p.x.push_back(torus_normalize(c));
    return p;
}

bool QPoint::is_zero() const {
    for (const auto& c : x)
        if (c != 0) return false;
    return true;
}

QPoint act(const IntMat& g, const QPoint& pt) {
    if (g.cols() != static_cast<int>(pt.x.size()))
        throw DimensionError("act: dimension mismatch");
    std::vector<Rat> out(g.rows(), Rat(0));
    for (int i = 0; i < g.rows(); ++i) {
        Rat acc = 0;
        for (int j = 0; j < g.cols(); ++j)
            if (g.at(i, j) != 0) acc += Rat(g.at(i, j)) * pt.x[j];
        out[i] = acc;
    }
    return QPoint::of(std::move(out));
}

const char* label_name(TorusLabel l) {
    switch (l) {
        case TorusLabel::Origin: return "Origin";
        case TorusLabel::A1: return "A1";
        case TorusLabel::A2: return "A2";
        case TorusLabel::A3: return "A3";
        case TorusLabel::A4: return "A4";
        case TorusLabel::A1p: return "A1'";
        case TorusLabel::A2p: return "A2'";
        case TorusLabel::A3p: return "A3'";
        case TorusLabel::A4p: return "A4'";
        case TorusLabel::BandX: return "BandX";
        case TorusLabel::BandY: return "BandY";
        case TorusLabel::CentralResidue: return "CentralResidue";
    }
    return "?";
}

namespace {

const Rat& quarter() {
    static const Rat q(1, 4);
    return q;
}

// Half-open 45-degree sectors around the origin; each contains its
// counter-clockwise bounding ray. Returns 0..7, or -1 for the origin.
int octant(const Rat& x, const Rat& y) {
    if (x == 0 && y == 0) return -1;
    if (x > 0 && y > 0) {
        if (y <= x) return 0;
        return 1; // 0 <= x < y handled below for x == 0
    }
    if (x == 0 && y > 0) return 1;
    if (x < 0 && y > 0) return (y >= -x) ? 2 : 3;
    if (x < 0 && y == 0) return 3;
    if (x < 0 && y < 0) return (y >= x) ? 4 : 5;
    if (x == 0 && y < 0) return 5;
    // x > 0, y <= 0
    if (y < 0) return (x <= -y) ? 6 : 7;
    return 7; // positive x-axis
}

// Octant -> A label index (1..4).
const int kOctLabel[8] = {2, 1, 4, 3, 2, 1, 4, 3};

bool in_small_square(const QPoint& pt) {
    return abs(pt.x[0]) < quarter() && abs(pt.x[1]) < quarter();
}

} // namespace

bool in_A(int i, const QPoint& pt) {
    if (!in_small_square(pt)) return false;
    int o = octant(pt.x[0], pt.x[1]);
    if (o < 0) return false;
    return kOctLabel[o] == i;
}

bool in_Aprime(int i, const QPoint& pt) {
    const Rat& x = pt.x[0];
    const Rat& y = pt.x[1];
    const Rat q = quarter();
    switch (i) {
        case 1:
            return (x >= q && x - q < y && y < q) || (x <= -q && -q < y && y < x + q);
        case 2:
            return (y >= q && y - q < x && x < q) || (y <= -q && -q < x && x < y + q);
        case 3:
            return (y <= -q && -y - q < x && x < q) || (y >= q && -q < x && x < q - y);
        case 4:
            return (x >= q && -q < y && y < q - x) || (x <= -q && -x - q < y && y < q);
    }
    return false;
}

TorusLabel classify_T2(const QPoint& pt) {
    if (pt.is_zero()) return TorusLabel::Origin;
    for (int i = 1; i <= 4; ++i)
        if (in_A(i, pt))
            return static_cast<TorusLabel>(static_cast<int>(TorusLabel::A1) + i - 1);
    for (int i = 1; i <= 4; ++i)
        if (in_Aprime(i, pt))
            return static_cast<TorusLabel>(static_cast<int>(TorusLabel::A1p) + i - 1);
    if (abs(pt.x[0]) >= quarter()) return TorusLabel::BandX;
    if (abs(pt.x[1]) >= quarter()) return TorusLabel::BandY;
    return TorusLabel::CentralResidue;
}

std::vector<std::pair<std::string, std::vector<std::string>>> partition_table() {
    return {
        {"Origin", {"x = 0", "y = 0"}},
        {"A1", {"|x| < 1/4", "|y| < 1/4", "sector (45,90]: y > 0, 0 <= x < y",
                "or sector (225,270]: y < 0, y < x <= 0"}},
        {"A2", {"|x| < 1/4", "|y| < 1/4", "sector (0,45]: x > 0, 0 < y <= x",
                "or sector (180,225]: x < 0, x <= y < 0"}},
        {"A3", {"|x| < 1/4", "|y| < 1/4", "sector (315,360]: x > 0, -x < y <= 0",
                "or sector (135,180]: x < 0, 0 <= y < -x"}},
        {"A4", {"|x| < 1/4", "|y| < 1/4", "sector (270,315]: y < 0, 0 < x <= -y",
                "or sector (90,135]: x < 0, y > 0, y >= -x"}},
        {"A1'", {"x >= 1/4, x - 1/4 < y < 1/4", "or x <= -1/4, -1/4 < y < x + 1/4"}},
        {"A2'", {"y >= 1/4, y - 1/4 < x < 1/4", "or y <= -1/4, -1/4 < x < y + 1/4"}},
        {"A3'", {"y <= -1/4, -y - 1/4 < x < 1/4", "or y >= 1/4, -1/4 < x < 1/4 - y"}},
        {"A4'", {"x >= 1/4, -1/4 < y < 1/4 - x", "or x <= -1/4, -x - 1/4 < y < 1/4"}},
        {"BandX", {"|x| >= 1/4", "not in any A'"}},
        {"BandY", {"|y| >= 1/4", "not in any A' or BandX"}},
        {"CentralResidue", {"unreached (the sectors tile the punctured quarter square)"}},
    };
}

namespace {

void for_each_grid2(long Q, const std::function<void(const QPoint&)>& fn) {
    long lo = -(Q / 2) + ((Q % 2 == 0) ? 1 : 0);
    long hi = Q / 2;
    for (long i = lo; i <= hi; ++i)
        for (long j = lo; j <= hi; ++j) {
            QPoint pt;
            pt.x = {Rat(i, Q), Rat(j, Q)};
            pt.x[0].canonicalize();
            pt.x[1].canonicalize();
            fn(pt);
        }
}

} // namespace

PartitionReport check_partition(long Q) {
    if (Q < 4) throw PolicyError("check_partition: Q >= 4 required");
    PartitionReport rep;
    for_each_grid2(Q, [&](const QPoint& pt) {
        ++rep.points;
        int a_hits = 0, ap_hits = 0;
        for (int i = 1; i <= 4; ++i) {
            if (in_A(i, pt)) ++a_hits;
            if (in_Aprime(i, pt)) ++ap_hits;
        }
        bool origin = pt.is_zero();
        bool band_x = abs(pt.x[0]) >= quarter();
        bool band_y = abs(pt.x[1]) >= quarter();
        // pairwise disjointness of the A_i and of the A_i'
        if (a_hits > 1 || ap_hits > 1) ++rep.violations;
        // A' sets never meet A sets
        if (a_hits > 0 && ap_hits > 0) ++rep.violations;
        // coverage: origin, some A_i, or a band
        if (!origin && a_hits == 0 && !band_x && !band_y) ++rep.violations;
        // the origin belongs to nothing else
        if (origin && (a_hits || ap_hits || band_x || band_y)) ++rep.violations;
        // classifier must emit a definite label
        if (classify_T2(pt) == TorusLabel::CentralResidue) ++rep.violations;
    });
    return rep;
}

namespace {

struct Identity {
    std::string name;
    IntMat g;
    std::vector<int> from; // A labels; negative index -i means A_i'
    std::vector<int> to;
};

bool in_union(const std::vector<int>& sets, const QPoint& pt) {
    for (int s : sets) {
        if (s > 0 && in_A(s, pt)) return true;
        if (s < 0 && in_Aprime(-s, pt)) return true;
    }
    return false;
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

std::vector<IdentityReport> check_mapping_identities(long Q) {
    if (Q < 4) throw PolicyError("check_mapping_identities: Q >= 4 required");
    std::vector<Identity> ids = {
        {"g12+ (A3 u A4') = A3 u A4", sl2(1, 1, 0, 1), {3, -4}, {3, 4}},
        {"g21+ (A3' u A4) = A3 u A4", sl2(1, 0, 1, 1), {-3, 4}, {3, 4}},
        {"g12- (A1' u A2) = A1 u A2", sl2(1, -1, 0, 1), {-1, 2}, {1, 2}},
        {"g21- (A1 u A2') = A1 u A2", sl2(1, 0, -1, 1), {1, -2}, {1, 2}},
    };
    std::vector<IdentityReport> out;
    for (const auto& id : ids) {
        IdentityReport rep{id.name, 0};
        IntMat ginv = inverse_unimodular(id.g);
        for_each_grid2(Q, [&](const QPoint& pt) {
            if (in_union(id.from, pt) && !in_union(id.to, act(id.g, pt))) ++rep.violations;
            if (in_union(id.to, pt) && !in_union(id.from, act(ginv, pt))) ++rep.violations;
        });
        out.push_back(std::move(rep));
    }
    return out;
}

long negative_control_violations(long Q) {
    IntMat g = sl2(1, 1, 0, 1);
    long violations = 0;
    for_each_grid2(Q, [&](const QPoint& pt) {
        if (in_A(1, pt) && !in_A(1, act(g, pt))) ++violations;
    });
    return violations;
}

BpCpReport check_Bp_Cp(int p, long Q) {
    if (p < 3 || p > 5) throw PolicyError("check_Bp_Cp: 3 <= p <= 5 required");
    if (Q < 2) throw PolicyError("check_Bp_Cp: Q >= 2 required");
    double size = std::pow(static_cast<double>(Q), p);
    if (size > 2e7) throw SizeError("check_Bp_Cp: grid too large");

    auto in_B = [&](const QPoint& y, int i) {
        for (int k = 0; k < i; ++k)
            if (y.x[k] != 0) return false;
        return true;
    };
    auto in_C = [&](const QPoint& y, int i) {
        if (y.x[0] == 0) return false;
        if (y.x[0] != y.x[i - 1]) return false;
        for (int k = 1; k + 1 < i; ++k)
            if (y.x[k] != 0) return false;
        return true;
    };

    BpCpReport rep;
    long lo = -(Q / 2) + ((Q % 2 == 0) ? 1 : 0);
    long hi = Q / 2;
    std::vector<long> idx(p, lo);
    std::vector<IntMat> g1i;
    for (int i = 3; i <= p; ++i) {
        IntMat g = IntMat::identity(p);
        g.at(0, i - 1) = 1; // adds coordinate i into coordinate 1
        g1i.push_back(g);
    }
    for (;;) {
        QPoint y;
        y.x.resize(p);
        for (int k = 0; k < p; ++k) {
            y.x[k] = Rat(idx[k], Q);
            y.x[k].canonicalize();
        }
        ++rep.points;

        for (int i = 3; i <= p; ++i) {
            if (in_B(y, i - 1) && !in_B(y, i)) {
                QPoint img = act(g1i[i - 3], y);
                if (!in_C(img, i)) ++rep.mapping_violations;
            }
        }
        int c_hits = 0;
        bool in_union_c3 = false;
        for (int i = 2; i <= p; ++i)
            if (in_C(y, i)) {
                ++c_hits;
                if (i >= 3) in_union_c3 = true;
            }
        if (c_hits > 1) ++rep.disjoint_violations;
        if (in_union_c3 && !(y.x[0] != 0 && y.x[1] == 0)) ++rep.union_violations;

        int k = p - 1;
        while (k >= 0 && idx[k] == hi) idx[k--] = lo;
        if (k < 0) break;
        ++idx[k];
    }
    return rep;
}

} // namespace slnz
