#ifndef SLNZ_TORUS_HPP
#define SLNZ_TORUS_HPP

#include <string>
#include <utility>
#include <vector>

#include "slnz/intmat.hpp"

namespace slnz {

// Point on T^p with exact rational coordinates, each normalized into the
// fundamental domain (-1/2, 1/2].
struct QPoint {
    std::vector<Rat> x;

    static QPoint of(std::vector<Rat> coords); // normalizes
    bool is_zero() const;
    bool operator==(const QPoint& o) const { return x == o.x; }
};

Rat torus_normalize(const Rat& v);

// Exact linear action of an integer matrix followed by reduction to the
// fundamental domain. Bijective on every (1/Q)-grid.
QPoint act(const IntMat& g, const QPoint& pt);

// The labelled partition of T^2. Eight triangle halves around the origin
// carry the A labels (two antipodal pieces each); the A' triangles sit in
// the bands; everything else falls to the bands themselves. Boundary
// convention: each angular sector is half-open, containing its
// counter-clockwise bounding ray; A' sets contain only the boundary part on
// the quarter square, vertices excluded.
enum class TorusLabel { Origin, A1, A2, A3, A4, A1p, A2p, A3p, A4p, BandX, BandY, CentralResidue };

const char* label_name(TorusLabel l);

// Raw membership predicates (no precedence applied). i in 1..4.
bool in_A(int i, const QPoint& pt);
bool in_Aprime(int i, const QPoint& pt);

// Precedence classifier: Origin > A > A' > BandX > BandY > CentralResidue.
TorusLabel classify_T2(const QPoint& pt);

// The boundary convention as data: one clause list per label.
std::vector<std::pair<std::string, std::vector<std::string>>> partition_table();

struct PartitionReport {
    long points = 0;
    long violations = 0;
};

// Exhaustive exact check over the (1/Q)-grid: the A sets are pairwise
// disjoint, disjoint from every A' set, and together with the bands and the
// origin they cover everything.
PartitionReport check_partition(long Q);

struct IdentityReport {
    std::string name;
    long violations = 0;
};

// The four transvection mapping identities, both inclusions each, on the
// (1/Q)-grid.
std::vector<IdentityReport> check_mapping_identities(long Q);

// A deliberately false identity; returns its (positive) violation count.
long negative_control_violations(long Q);

struct BpCpReport {
    long points = 0;
    long mapping_violations = 0;
    long disjoint_violations = 0;
    long union_violations = 0;
    long total() const { return mapping_violations + disjoint_violations + union_violations; }
};

// Coordinate-zero sets in T^p: B_i = {y_k = 0 for k <= i} and
// C_i = {y_1 = y_i != 0, y_k = 0 for 1 < k < i}. Verifies that I + e_{1i}
// maps B_{i-1} minus B_i into C_i (i >= 3), that the C_i are pairwise
// disjoint, and that the union over i >= 3 stays inside {y_1 != 0, y_2 = 0}.
BpCpReport check_Bp_Cp(int p, long Q);

} // namespace slnz

#endif
