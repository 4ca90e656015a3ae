#ifndef SLNZ_SPECTRAL_HPP
#define SLNZ_SPECTRAL_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "slnz/intmat.hpp"

namespace slnz {

// |SL_n(F_p)| = p^(n(n-1)/2) * prod_{i=2..n} (p^i - 1)
Int sl_order(int n, std::int64_t p);

// Breadth-first closure of SL_n(F_p) from the identity under the +-1
// elementary generators; element ids are BFS-deterministic, identity is 0.
struct GroupTable {
    int n = 0;
    std::int64_t p = 0;
    std::vector<ModMat> elements;
    std::unordered_map<std::string, int> index;

    int id_of(const ModMat& m) const;
};

GroupTable enumerate_group(int n, std::int64_t p, long size_cap = 1000000);

// Undirected regular multigraph given by neighbor lists (with multiplicity).
struct Graph {
    int degree = 0;
    std::vector<std::vector<int>> adj;
    long order() const { return static_cast<long>(adj.size()); }
};

Graph make_cycle(int m);
Graph make_complete(int m);

struct CayleyGraph {
    GroupTable group;
    Graph graph;
};

// Cayley graph over the 2n(n-1) generators I +- e_ij (multiplicities kept
// when generators coincide mod p, which happens only for p = 2).
CayleyGraph build_cayley(GroupTable table);

struct SpectralReport {
    long order = 0;
    int degree = 0;
    double lambda2 = 0;    // second-largest eigenvalue of A/d
    double lambda_min = 0; // smallest eigenvalue of A/d
    double beta = 0;       // 1 - lambda2
    long iterations = 0;
    bool dense_path = false;
};

// Second eigenvalue by deflated power iteration on the half-shifted
// operator (I + A/d)/2 (dense storage below 4000 vertices, sparse above);
// relative accuracy 1e-8, hard iteration cap.
SpectralReport spectral_gap(const Graph& g);

// Full spectrum of the normalized adjacency by cyclic Jacobi sweeps,
// descending order. Dense-only; requires order <= 1500.
std::vector<double> full_spectrum(const Graph& g);

// Smallest t with TV(lazy-walk distribution from a point, uniform) <=
// threshold, by exact dense iteration. Requires order <= 10^4.
long mixing_time(const Graph& g, double threshold = 0.25);

// Max over generators of ||g v - v||^2 for the uniform unit vector v on the
// n basis states of l^2(F_p^n), as an exact rational (equals 2/n).
Rat displacement_upper_bound_sq(int n, std::int64_t p);

struct CompareReport {
    int n = 0;
    std::int64_t p = 0;
    SpectralReport spectral;
    bool property_t_applicable = false; // n >= 3
    double lower_bound = 0;             // 1/(4 (31 sqrt n + 700)^2)
    bool lower_ok = false;
    double upper_informational = 0;     // 1/n, reported only
    std::string displacement_sq;        // exact rational, text form
};

CompareReport compare_bounds(int n, std::int64_t p, long size_cap = 1000000);

} // namespace slnz

#endif
