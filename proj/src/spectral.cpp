#include "slnz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>

#include "slnz/errors.hpp"

namespace slnz {

Int sl_order(int n, std::int64_t p) {
    Int order = 1;
    Int pz(static_cast<long>(p));
    mpz_pow_ui(order.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(n) * (n - 1) / 2);
    for (int i = 2; i <= n; ++i) {
        Int pi;
        mpz_pow_ui(pi.get_mpz_t(), pz.get_mpz_t(), i);
        order *= pi - 1;
    }
    return order;
}

int GroupTable::id_of(const ModMat& m) const {
    auto it = index.find(m.encode());
    return it == index.end() ? -1 : it->second;
}

namespace {

std::vector<ModMat> elementary_generators(int n, std::int64_t p) {
    std::vector<ModMat> gens;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            for (int s : {1, -1}) {
                ModMat g = ModMat::identity(n, p);
                g.at(i - 1, j - 1) = ((s % p) + p) % p;
                gens.push_back(g);
            }
        }
    return gens;
}

} // namespace

GroupTable enumerate_group(int n, std::int64_t p, long size_cap) {
    if (n < 2) throw DimensionError("enumerate_group: n >= 2 required");
    Int predicted = sl_order(n, p);
    if (predicted > size_cap)
        throw SizeError("enumerate_group: predicted order " + predicted.get_str() +
                        " exceeds the cap " + std::to_string(size_cap));

    GroupTable t;
    t.n = n;
    t.p = p;
    auto gens = elementary_generators(n, p);
    ModMat id = ModMat::identity(n, p);
    t.elements.push_back(id);
    t.index.emplace(id.encode(), 0);
    std::deque<int> frontier{0};
    while (!frontier.empty()) {
        int cur = frontier.front();
        frontier.pop_front();
        for (const auto& g : gens) {
            ModMat next = mul(t.elements[cur], g);
            std::string key = next.encode();
            auto it = t.index.find(key);
            if (it == t.index.end()) {
                int id_new = static_cast<int>(t.elements.size());
                t.index.emplace(std::move(key), id_new);
                t.elements.push_back(next);
                frontier.push_back(id_new);
            }
        }
    }
    if (Int(static_cast<long>(t.elements.size())) != predicted)
        throw Error("enumerate_group: closure size does not match the order formula");
    return t;
}

Graph make_cycle(int m) {
    Graph g;
    g.degree = 2;
    g.adj.resize(m);
    for (int i = 0; i < m; ++i) {
        g.adj[i].push_back((i + 1) % m);
        g.adj[i].push_back((i + m - 1) % m);
    }
    return g;
}

Graph make_complete(int m) {
    Graph g;
    g.degree = m - 1;
    g.adj.resize(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) g.adj[i].push_back(j);
    return g;
}

CayleyGraph build_cayley(GroupTable table) {
    CayleyGraph cg;
    cg.graph.degree = 2 * table.n * (table.n - 1);
    cg.graph.adj.resize(table.elements.size());
    auto gens = elementary_generators(table.n, table.p);
    for (size_t v = 0; v < table.elements.size(); ++v) {
        cg.graph.adj[v].reserve(gens.size());
        for (const auto& g : gens) {
            int u = table.id_of(mul(table.elements[v], g));
            if (u < 0) throw Error("build_cayley: generator image missing (internal)");
            cg.graph.adj[v].push_back(u);
        }
    }
    cg.group = std::move(table);
    return cg;
}

namespace {

// Deterministic unit start vector orthogonal to constants.
std::vector<double> start_vector(long n) {
    std::mt19937_64 rng(0x5EED5EEDull);
    std::vector<double> v(n);
    double mean = 0;
    for (auto& x : v) {
        x = static_cast<double>(rng() % 2048) / 2048.0 - 0.5;
        mean += x;
    }
    mean /= static_cast<double>(n);
    double norm = 0;
    for (auto& x : v) {
        x -= mean;
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    return v;
}

void deflate_and_normalize(std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double norm = 0;
    for (auto& x : v) {
        x -= mean;
        norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0) throw ConvergenceError("power iteration collapsed onto constants");
    for (auto& x : v) x /= norm;
}

// Largest eigenvalue (with eigenvector orthogonal to constants) of the
// operator v -> (v + sign * A v / d) / 2. Returns the *underlying* A/d
// eigenvalue: lambda = 2*theta - 1 for sign=+1, 1 - 2*theta for sign=-1.
struct PowerResult {
    double lambda = 0;
    long iterations = 0;
};

PowerResult power_extreme(const Graph& g, const std::vector<std::vector<double>>* dense,
                          int sign, double tol) {
    const long n = g.order();
    std::vector<double> v = start_vector(n), w(n);
    double theta = 0;
    const long cap = 1000000;
    for (long it = 1; it <= cap; ++it) {
        // w = (v + sign * A v / d) / 2
        if (dense) {
            for (long i = 0; i < n; ++i) {
                double acc = 0;
                const auto& row = (*dense)[i];
                for (long j = 0; j < n; ++j) acc += row[j] * v[j];
                w[i] = 0.5 * (v[i] + sign * acc);
            }
        } else {
            const double inv_d = 1.0 / g.degree;
            for (long i = 0; i < n; ++i) {
                double acc = 0;
                for (int u : g.adj[i]) acc += v[u];
                w[i] = 0.5 * (v[i] + sign * acc * inv_d);
            }
        }
        // Rayleigh quotient and residual on the shifted operator.
        double num = 0, nv = 0;
        for (long i = 0; i < n; ++i) {
            num += v[i] * w[i];
            nv += v[i] * v[i];
        }
        theta = num / nv;
        double res = 0;
        for (long i = 0; i < n; ++i) {
            double r = w[i] - theta * v[i];
            res += r * r;
        }
        res = std::sqrt(res / nv);
        v.swap(w);
        deflate_and_normalize(v);
        if (res <= tol * std::max(theta, 1e-12))
            return {sign > 0 ? 2.0 * theta - 1.0 : 1.0 - 2.0 * theta, it};
    }
    throw ConvergenceError("power iteration did not reach tolerance " + std::to_string(tol));
}

} // namespace

SpectralReport spectral_gap(const Graph& g) {
    if (g.order() < 2) throw SizeError("spectral_gap: graph too small");
    SpectralReport rep;
    rep.order = g.order();
    rep.degree = g.degree;
    rep.dense_path = g.order() <= 4000;

    std::vector<std::vector<double>> dense;
    if (rep.dense_path) {
        dense.assign(g.order(), std::vector<double>(g.order(), 0.0));
        const double inv_d = 1.0 / g.degree;
        for (long i = 0; i < g.order(); ++i)
            for (int u : g.adj[i]) dense[i][u] += inv_d;
    }
    const std::vector<std::vector<double>>* dp = rep.dense_path ? &dense : nullptr;

    auto top = power_extreme(g, dp, +1, 1e-8);
    auto bot = power_extreme(g, dp, -1, 1e-8);
    rep.lambda2 = top.lambda;
    rep.lambda_min = bot.lambda;
    rep.beta = 1.0 - rep.lambda2;
    rep.iterations = top.iterations + bot.iterations;
    return rep;
}

std::vector<double> full_spectrum(const Graph& g) {
    const long n = g.order();
    if (n > 1500) throw SizeError("full_spectrum: order above the dense Jacobi cap 1500");
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    const double inv_d = 1.0 / g.degree;
    for (long i = 0; i < n; ++i)
        for (int u : g.adj[i]) a[i][u] += inv_d;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (long i = 0; i < n; ++i)
            for (long j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-15) continue;
                double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (long k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (long k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (long i = 0; i < n; ++i) eig[i] = a[i][i];
    std::sort(eig.rbegin(), eig.rend());
    return eig;
}

long mixing_time(const Graph& g, double threshold) {
    const long n = g.order();
    if (n > 10000) throw SizeError("mixing_time: order above the dense cap 10^4");
    std::vector<double> mu(n, 0.0), next(n, 0.0);
    mu[0] = 1.0;
    const double uniform = 1.0 / static_cast<double>(n);
    const double inv_2d = 0.5 / g.degree;
    for (long t = 0;; ++t) {
        double tv = 0, total = 0;
        for (long i = 0; i < n; ++i) {
            tv += std::abs(mu[i] - uniform);
            total += mu[i];
            if (mu[i] < -1e-15) throw Error("mixing_time: negative mass (internal)");
        }
        if (std::abs(total - 1.0) > 1e-12) throw Error("mixing_time: mass drift (internal)");
        if (tv / 2.0 <= threshold) return t;
        if (t > 1000000) throw ConvergenceError("mixing_time: walk failed to mix");
        std::fill(next.begin(), next.end(), 0.0);
        for (long i = 0; i < n; ++i) {
            if (mu[i] == 0.0) continue;
            next[i] += 0.5 * mu[i];
            double share = mu[i] * inv_2d;
            for (int u : g.adj[i]) next[u] += share;
        }
        mu.swap(next);
    }
}

Rat displacement_upper_bound_sq(int n, std::int64_t p) {
    if (n < 2) throw DimensionError("displacement: n >= 2 required");
    if (p < 2) throw DimensionError("displacement: p >= 2 required");
    // v = (1/sqrt n) * sum_k delta_{e_k}; track integer coefficients of
    // sqrt(n) * (g v - v) per basis point of F_p^n.
    ModMat idm(1, 1, p); // validates p prime
    (void)idm;
    Rat best(0);
    std::vector<std::int64_t> state(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            for (int s : {1, -1}) {
                std::map<std::vector<std::int64_t>, long> diff;
                for (int k = 0; k < n; ++k) {
                    std::fill(state.begin(), state.end(), 0);
                    state[k] = 1; // e_k
                    // g e_k: row i gains s * (e_k)_j
                    std::vector<std::int64_t> img = state;
                    img[i - 1] = ((img[i - 1] + s * state[j - 1]) % p + p) % p;
                    diff[img] += 1;
                    diff[state] -= 1;
                }
                long sq = 0;
                for (const auto& [w, c] : diff) sq += c * c;
                Rat val(sq, n);
                val.canonicalize();
                if (val > best) best = val;
            }
        }
    return best;
}

CompareReport compare_bounds(int n, std::int64_t p, long size_cap) {
    CompareReport rep;
    rep.n = n;
    rep.p = p;
    CayleyGraph cg = build_cayley(enumerate_group(n, p, size_cap));
    rep.spectral = spectral_gap(cg.graph);
    rep.property_t_applicable = n >= 3;
    if (rep.property_t_applicable) {
        double denom = 31.0 * std::sqrt(static_cast<double>(n)) + 700.0;
        rep.lower_bound = 1.0 / (4.0 * denom * denom);
        rep.lower_ok = rep.spectral.beta >= rep.lower_bound;
    }
    rep.upper_informational = 1.0 / static_cast<double>(n);
    Rat d = displacement_upper_bound_sq(n, p);
    rep.displacement_sq = d.get_str();
    return rep;
}

} // namespace slnz
