#include "slnz/vecsys.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

#include "slnz/numtheory.hpp"

namespace slnz {

const char* policy_name(ReducePolicy p) {
    switch (p) {
        case ReducePolicy::Z3k: return "Z-3k";
        case ReducePolicy::Z2k1: return "Z-2k1";
        case ReducePolicy::Fp2k: return "Fp-2k";
    }
    return "?";
}

namespace {

IntMat stack_rows(const IntMat& mat, const std::vector<int>& pos) {
    IntMat s(static_cast<int>(pos.size()), mat.cols());
    for (size_t i = 0; i < pos.size(); ++i)
        for (int j = 0; j < mat.cols(); ++j)
            s.at(static_cast<int>(i), j) = mat.at(pos[i], j);
    return s;
}

std::vector<Int> row_of(const IntMat& mat, int i) {
    std::vector<Int> r(mat.cols());
    for (int j = 0; j < mat.cols(); ++j) r[j] = mat.at(i, j);
    return r;
}

// x (1 x m) times S (m x k)
std::vector<Int> row_times(const std::vector<Int>& x, const IntMat& s) {
    std::vector<Int> r(s.cols(), Int(0));
    for (int i = 0; i < s.rows(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < s.cols(); ++j) r[j] += x[i] * s.at(i, j);
    }
    return r;
}

int rank_rows(const IntMat& rows);

// Lexicographically-first independent subset of `candidates` (0-based row
// positions) of size up to k; greedy by position.
std::vector<int> greedy_independent(const IntMat& mat, const std::vector<int>& candidates, int k) {
    std::vector<int> chosen;
    for (int pos : candidates) {
        if (static_cast<int>(chosen.size()) == k) break;
        std::vector<int> trial = chosen;
        trial.push_back(pos);
        if (rank_rows(stack_rows(mat, trial)) == static_cast<int>(trial.size()))
            chosen = trial;
    }
    return chosen;
}

// Row Hermite form: T * S = H with T unimodular and H in row echelon form,
// pivots positive, entries above each pivot reduced. The transform entries
// stay far smaller than the Smith form's, which matters because solution
// coefficients feed back into matrix entries across recursion levels.
struct LeftHnf {
    IntMat H, T;
    int rank = 0;
    std::vector<int> pivot_col; // per echelon row
};

Int round_quot(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (b > 0 ? r * 2 > b : r * 2 < b) q += 1;
    return q;
}

LeftHnf left_hnf(const IntMat& S) {
    int m = S.rows(), k = S.cols();
    LeftHnf w{S, IntMat::identity(m), 0, {}};
    auto row_sub = [&](int i, int r, const Int& q) {
        if (q == 0) return;
        for (int j = 0; j < k; ++j) w.H.at(i, j) -= q * w.H.at(r, j);
        for (int j = 0; j < m; ++j) w.T.at(i, j) -= q * w.T.at(r, j);
    };
    auto row_swap = [&](int i, int r) {
        if (i == r) return;
        for (int j = 0; j < k; ++j) std::swap(w.H.at(i, j), w.H.at(r, j));
        for (int j = 0; j < m; ++j) std::swap(w.T.at(i, j), w.T.at(r, j));
    };
    auto row_neg = [&](int i) {
        for (int j = 0; j < k; ++j) w.H.at(i, j) = -w.H.at(i, j);
        for (int j = 0; j < m; ++j) w.T.at(i, j) = -w.T.at(i, j);
    };
    int r = 0;
    for (int c = 0; c < k && r < m; ++c) {
        for (;;) {
            int best = -1;
            Int bestabs;
            for (int i = r; i < m; ++i) {
                if (w.H.at(i, c) == 0) continue;
                Int a = abs(w.H.at(i, c));
                if (best < 0 || a < bestabs) { best = i; bestabs = a; }
            }
            if (best < 0) break;
            row_swap(r, best);
            bool clean = true;
            for (int i = r + 1; i < m; ++i)
                if (w.H.at(i, c) != 0) {
                    row_sub(i, r, round_quot(w.H.at(i, c), w.H.at(r, c)));
                    if (w.H.at(i, c) != 0) clean = false;
                }
            if (clean) break;
        }
        if (r < m && w.H.at(r, c) != 0) {
            if (w.H.at(r, c) < 0) row_neg(r);
            for (int i = 0; i < r; ++i)
                if (w.H.at(i, c) != 0) {
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), w.H.at(i, c).get_mpz_t(), w.H.at(r, c).get_mpz_t());
                    row_sub(i, r, q);
                }
            w.pivot_col.push_back(c);
            ++r;
        }
    }
    w.rank = r;
    return w;
}

// Rounded projection passes shrink a vector modulo a lattice basis.
void size_reduce_against(std::vector<Int>& x, const std::vector<std::vector<Int>>& basis) {
    for (int pass = 0; pass < 4; ++pass) {
        bool changed = false;
        for (const auto& z : basis) {
            Int num = 0, den = 0;
            for (size_t i = 0; i < x.size(); ++i) {
                num += x[i] * z[i];
                den += z[i] * z[i];
            }
            if (den == 0) continue;
            Int t = round_quot(num, den);
            if (t == 0) continue;
            for (size_t i = 0; i < x.size(); ++i) x[i] -= t * z[i];
            changed = true;
        }
        if (!changed) break;
    }
}

std::vector<std::vector<Int>> mutually_reduce(std::vector<std::vector<Int>> basis) {
    for (int pass = 0; pass < 4; ++pass) {
        bool changed = false;
        for (size_t a = 0; a < basis.size(); ++a)
            for (size_t b = 0; b < basis.size(); ++b) {
                if (a == b) continue;
                Int num = 0, den = 0;
                for (size_t i = 0; i < basis[a].size(); ++i) {
                    num += basis[a][i] * basis[b][i];
                    den += basis[b][i] * basis[b][i];
                }
                if (den == 0) continue;
                Int t = round_quot(num, den);
                if (t == 0) continue;
                for (size_t i = 0; i < basis[a].size(); ++i) basis[a][i] -= t * basis[b][i];
                changed = true;
            }
        if (!changed) break;
    }
    return basis;
}

int rank_rows(const IntMat& rows) { return left_hnf(rows).rank; }

// Basis of { z in Z^m : z * S = 0 }, size-reduced.
std::vector<std::vector<Int>> left_kernel(const IntMat& S) {
    int m = S.rows();
    if (S.cols() == 0) {
        std::vector<std::vector<Int>> basis;
        for (int i = 0; i < m; ++i) {
            std::vector<Int> e(m, Int(0));
            e[i] = 1;
            basis.push_back(e);
        }
        return basis;
    }
    LeftHnf w = left_hnf(S);
    std::vector<std::vector<Int>> basis;
    for (int i = w.rank; i < m; ++i) basis.push_back(row_of(w.T, i));
    return mutually_reduce(std::move(basis));
}

// Integer solution of x * S = b (S: m x k), size-reduced modulo the kernel.
// Empty optional when unsolvable.
std::optional<std::vector<Int>> solve_left(const IntMat& S, const std::vector<Int>& b) {
    int m = S.rows(), k = S.cols();
    LeftHnf w = left_hnf(S);
    std::vector<Int> rem = b;
    std::vector<Int> coeff(w.rank, Int(0));
    for (int r = 0; r < w.rank; ++r) {
        int c = w.pivot_col[r];
        if (rem[c] == 0) continue;
        if (!mpz_divisible_p(rem[c].get_mpz_t(), w.H.at(r, c).get_mpz_t()))
            return std::nullopt;
        coeff[r] = rem[c] / w.H.at(r, c);
        for (int j = 0; j < k; ++j) rem[j] -= coeff[r] * w.H.at(r, j);
    }
    for (int j = 0; j < k; ++j)
        if (rem[j] != 0) return std::nullopt;
    std::vector<Int> x(m, Int(0));
    for (int r = 0; r < w.rank; ++r) {
        if (coeff[r] == 0) continue;
        for (int i = 0; i < m; ++i) x[i] += coeff[r] * w.T.at(r, i);
    }
    std::vector<std::vector<Int>> kernel;
    for (int i = w.rank; i < m; ++i) kernel.push_back(row_of(w.T, i));
    size_reduce_against(x, mutually_reduce(std::move(kernel)));
    return x;
}

// Index of the subgroup generated by the rows (0 when not full rank).
Int lattice_index(const IntMat& rows) {
    auto f = smith_normal_form(rows).invariant_factors();
    if (static_cast<int>(f.size()) < rows.cols()) return 0;
    Int idx = 1;
    for (const Int& d : f) idx *= d;
    return idx;
}

// g = gcd(vals...) (>= 0) together with coefficients: sum coeffs[i]*vals[i] = g.
std::pair<Int, std::vector<Int>> gcd_combo(const std::vector<Int>& vals) {
    Int g = 0;
    std::vector<Int> coeffs(vals.size(), Int(0));
    for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == 0) continue;
        if (g == 0) {
            g = abs(vals[i]);
            coeffs.assign(vals.size(), Int(0));
            coeffs[i] = vals[i] > 0 ? 1 : -1;
            continue;
        }
        Int gn, s, t;
        mpz_gcdext(gn.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), vals[i].get_mpz_t());
        for (Int& c : coeffs) c *= s;
        coeffs[i] += t;
        g = gn;
        if (g == 1) break;
    }
    return {g, coeffs};
}

// Ascending prime search in the progression a (mod d) above `lower`,
// skipping `excl` and values not coprime to `coprime_to` (0 = no condition).
Int search_prime(const Int& a, const Int& d, const Int& lower, const std::set<Int>& excl,
                 const Int& coprime_to) {
    if (d <= 0) throw InvalidOpError("prime search: modulus must be positive");
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    if (g != 1)
        throw InvalidOpError("prime search: no solutions, gcd(a, d) = " + g.get_str());
    Int start = lower + 1;
    Int rem = ((a - start) % d + d) % d;
    Int q = start + rem;
    if (q < 2) q += ((Int(2) - q) / d + 1) * d;
    for (long budget = 0; budget < 1000000; ++budget, q += d) {
        if (excl.count(q)) continue;
        if (coprime_to != 0) {
            Int cg;
            mpz_gcd(cg.get_mpz_t(), q.get_mpz_t(), coprime_to.get_mpz_t());
            if (cg != 1) continue;
        }
        if (is_prime(q)) return q;
    }
    throw BudgetError("prime search: budget of 10^6 candidates exhausted");
}

} // namespace

Int dirichlet_prime(const Int& a, const Int& d, const Int& lower,
                    const std::set<Int>& distinct_from) {
    return search_prime(a, d, lower, distinct_from, 0);
}

VectorSystem VectorSystem::from_rows(IntMat rows, Ring ring, std::int64_t p) {
    VectorSystem v;
    v.k = rows.cols();
    v.n = rows.rows();
    v.ring = ring;
    v.p = p;
    if (ring == Ring::Fp) {
        if (p < 2) throw InvalidOpError("VectorSystem: F_p system needs a prime modulus");
        ModMat check(1, 1, p); // validates primality
        (void)check;
        for (int i = 0; i < rows.rows(); ++i)
            for (int j = 0; j < rows.cols(); ++j) {
                Int r;
                Int pz(static_cast<long>(p));
                mpz_fdiv_r(r.get_mpz_t(), rows.at(i, j).get_mpz_t(), pz.get_mpz_t());
                rows.at(i, j) = r;
            }
    }
    v.mat = std::move(rows);
    if (v.n < v.k) throw DimensionError("VectorSystem: fewer vectors than dimensions");
    if (!rows_generate_all(v.mat, ring, p))
        throw InvalidOpError("VectorSystem: system is not complete");
    return v;
}

VectorSystem VectorSystem::from_columns(const IntMat& cols, Ring ring, std::int64_t p) {
    return from_rows(cols.transpose(), ring, p);
}

VectorSystem VectorSystem::standard(int k, int n, Ring ring, std::int64_t p) {
    IntMat rows(n, k);
    for (int i = 0; i < k; ++i) rows.at(i, i) = 1;
    return from_rows(std::move(rows), ring, p);
}

bool VectorSystem::is_standard() const {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            if (mat.at(i, j) != ((i == j) ? 1 : 0)) return false;
    return true;
}

std::vector<Int> VectorSystem::vec(int pos1) const { return row_of(mat, pos1 - 1); }

bool rows_generate_all(const IntMat& rows, Ring ring, std::int64_t p) {
    int k = rows.cols();
    if (ring == Ring::Fp) {
        return reduce_mod_p(rows, p).rank() == k;
    }
    auto f = smith_normal_form(rows).invariant_factors();
    if (static_cast<int>(f.size()) != k) return false;
    for (const Int& d : f)
        if (d != 1) return false;
    return true;
}

VectorSystem apply_generalized(const VectorSystem& v, const GenTransvection& t) {
    if (t.n != v.n) throw InvalidOpError("apply_generalized: operation has wrong arity");
    IntMat m = mul(to_matrix(t), v.mat);
    if (v.ring == Ring::Fp) {
        Int r, pz(static_cast<long>(v.p));
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                mpz_fdiv_r(r.get_mpz_t(), m.at(i, j).get_mpz_t(), pz.get_mpz_t());
                m.at(i, j) = r;
            }
    }
    VectorSystem out = v;
    out.mat = std::move(m);
    return out;
}

bool is_prime_system(const IntMat& w) {
    if (!w.is_square()) throw DimensionError("is_prime_system: square system expected");
    Int d = det_exact(w);
    if (d == 0) return false;
    return is_squarefree(d);
}

namespace {

// Core construction. The determinant lower bound on the primes is part of
// the public contract; the reduction pipelines skip it (any pairwise
// distinct primes make the block quotient squarefree) to keep entries small
// across recursion levels.
PrimeSystemResult make_prime_core(const VectorSystem& v, bool enforce_det_bound) {
    if (v.ring != Ring::Z) throw PolicyError("make_prime_system: Z systems only");
    int k = v.k, n = v.n;
    if (n < 2 * k) throw PolicyError("make_prime_system: needs n >= 2k");

    // Helper set: prefer vectors outside the first k positions (so the block
    // can be the first k columns); fall back to a global choice when those
    // are rank-deficient.
    std::vector<int> tail;
    for (int i = k; i < n; ++i) tail.push_back(i);
    std::vector<int> helpers = greedy_independent(v.mat, tail, k);
    if (static_cast<int>(helpers.size()) < k) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        helpers = greedy_independent(v.mat, all, k);
    }
    if (static_cast<int>(helpers.size()) < k)
        throw InvalidOpError("make_prime_system: system is not complete");

    std::vector<int> targets;
    for (int i = 0; i < n && static_cast<int>(targets.size()) < k; ++i)
        if (std::find(helpers.begin(), helpers.end(), i) == helpers.end())
            targets.push_back(i);

    Int helper_det = abs(det_exact(stack_rows(v.mat, helpers)));

    // Per-target elimination on a working copy; gamma records the full-width
    // coefficient row of each step (over current values).
    IntMat work = v.mat;
    std::vector<std::vector<Int>> gamma;
    std::vector<Int> primes;
    std::set<Int> used;

    for (int j = 0; j < k; ++j) {
        int tj = targets[j];
        std::vector<int> srcpos;
        for (int i = 0; i < n; ++i)
            if (i != tj) srcpos.push_back(i);
        IntMat S = stack_rows(work, srcpos);
        std::vector<Int> u = row_of(work, tj);
        int m = n - 1;

        // Particular solution clearing coordinates 0..j-1.
        std::vector<Int> x0(m, Int(0));
        if (j > 0) {
            IntMat Sp(m, j);
            for (int i = 0; i < m; ++i)
                for (int c = 0; c < j; ++c) Sp.at(i, c) = S.at(i, c);
            std::vector<Int> b(j);
            for (int c = 0; c < j; ++c) b[c] = -u[c];
            auto sol = solve_left(Sp, b);
            if (!sol)
                throw Error("make_prime_system: cancellation step unsolvable (internal)");
            x0 = *sol;
        }
        std::vector<Int> w0 = row_times(x0, S);
        for (int c = 0; c < v.k; ++c) w0[c] += u[c];

        // Kernel of the first-j-columns map; gcd of its coordinate-j reach.
        std::vector<std::vector<Int>> kernel;
        if (j == 0) {
            kernel = left_kernel(IntMat(m, 0));
        } else {
            IntMat Sp(m, j);
            for (int i = 0; i < m; ++i)
                for (int c = 0; c < j; ++c) Sp.at(i, c) = S.at(i, c);
            kernel = left_kernel(Sp);
        }
        std::vector<Int> reach(kernel.size());
        for (size_t b = 0; b < kernel.size(); ++b) {
            Int val = 0;
            for (int i = 0; i < m; ++i) val += kernel[b][i] * S.at(i, j);
            reach[b] = val;
        }
        auto [dj, comb] = gcd_combo(reach);
        if (dj == 0)
            throw Error("make_prime_system: frozen coordinate (internal)");
        Int g;
        mpz_gcd(g.get_mpz_t(), w0[j].get_mpz_t(), dj.get_mpz_t());
        if (g != 1)
            throw Error("make_prime_system: progression not coprime (internal)");

        // The later cancellation steps need every placed prime coprime to the
        // helper-block determinant; the public contract additionally demands
        // primes above it (which implies coprimality).
        Int lower = enforce_det_bound ? Int(helper_det + 1) : Int(1);
        Int pj = search_prime(((w0[j] % dj) + dj) % dj, dj, lower, used, helper_det);
        used.insert(pj);
        primes.push_back(pj);
        Int steps = (pj - w0[j]) / dj;

        std::vector<Int> x = x0;
        std::vector<Int> zstar(m, Int(0));
        for (size_t b = 0; b < kernel.size(); ++b) {
            if (comb[b] == 0) continue;
            for (int i = 0; i < m; ++i) zstar[i] += comb[b] * kernel[b][i];
        }
        for (int i = 0; i < m; ++i) x[i] += steps * zstar[i];

        // Shrink the free coordinates: adding kernel elements of the first
        // j+1 columns leaves the zero pattern and the placed prime intact.
        {
            IntMat Spp(m, j + 1);
            for (int i = 0; i < m; ++i)
                for (int c = 0; c <= j; ++c) Spp.at(i, c) = S.at(i, c);
            size_reduce_against(x, left_kernel(Spp));
        }

        std::vector<Int> w = row_times(x, S);
        for (int c = 0; c < v.k; ++c) w[c] += u[c];
        for (int c = 0; c < j; ++c)
            if (w[c] != 0) throw Error("make_prime_system: pattern violated (internal)");
        if (w[j] != pj) throw Error("make_prime_system: prime placement failed (internal)");

        std::vector<Int> grow(n, Int(0));
        for (int i = 0; i < m; ++i) grow[srcpos[i]] = x[i];
        gamma.push_back(grow);
        for (int c = 0; c < v.k; ++c) work.at(tj, c) = w[c];
    }

    // Compose the steps into one transformation A (block [[X, Y], [0, I]] in
    // (targets, rest) order) and keep only its unipotent part [[I, X^-1 Y],
    // [0, I]], which is a single generalized operation with the same effect
    // on the subgroup generated by the block.
    IntMat A = IntMat::identity(n);
    for (int j = 0; j < k; ++j) {
        int tj = targets[j];
        std::vector<Int> newrow(n, Int(0));
        for (int c = 0; c < n; ++c) newrow[c] = A.at(tj, c);
        for (int s = 0; s < n; ++s) {
            if (gamma[j][s] == 0) continue;
            for (int c = 0; c < n; ++c) newrow[c] += gamma[j][s] * A.at(s, c);
        }
        for (int c = 0; c < n; ++c) A.at(tj, c) = newrow[c];
    }
    if (mul(A, v.mat) != work)
        throw Error("make_prime_system: composition mismatch (internal)");

    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
        if (std::find(targets.begin(), targets.end(), i) == targets.end()) rest.push_back(i);
    IntMat X(k, k), Y(k, n - k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) X.at(a, b) = A.at(targets[a], targets[b]);
        for (int b = 0; b < n - k; ++b) Y.at(a, b) = A.at(targets[a], rest[b]);
    }
    IntMat alpha_rows = mul(inverse_unimodular(X), Y); // k x (n-k), row = target

    std::vector<int> I1;
    for (int b = 0; b < n - k; ++b) {
        bool nz = false;
        for (int a = 0; a < k; ++a)
            if (alpha_rows.at(a, b) != 0) nz = true;
        if (nz) I1.push_back(rest[b] + 1);
    }
    IntMat alpha(static_cast<int>(I1.size()), k);
    for (size_t ia = 0; ia < I1.size(); ++ia) {
        int b = static_cast<int>(std::find(rest.begin(), rest.end(), I1[ia] - 1) - rest.begin());
        for (int a = 0; a < k; ++a) alpha.at(static_cast<int>(ia), a) = alpha_rows.at(a, b);
    }
    std::vector<int> J1(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) J1[i] = targets[i] + 1;

    GenTransvection op =
        I1.empty() ? GenTransvection(n, {rest[0] + 1}, J1, IntMat(1, k))
                   : GenTransvection(n, I1, J1, alpha);

    VectorSystem out = apply_generalized(v, op);

    // The one-op block spans the same subgroup as the eliminated block.
    Int bd = abs(det_exact(stack_rows(out.mat, targets)));
    Int expect = 1;
    for (const Int& q : primes) expect *= q;
    if (bd != expect)
        throw Error("make_prime_system: block determinant mismatch (internal)");

    PrimeSystemResult res;
    res.op = op;
    res.system = out;
    res.primes = primes;
    for (int t : targets) res.block.push_back(t + 1);
    for (int h : helpers) res.helpers.push_back(h + 1);
    res.helper_det = helper_det;
    return res;
}

} // namespace

PrimeSystemResult make_prime_system(const VectorSystem& v) {
    return make_prime_core(v, true);
}

namespace {

struct Pipeline {
    VectorSystem work;
    std::vector<GenTransvection> ops;

    void emit(const GenTransvection& op) {
        if (op.is_noop()) return;
        work = apply_generalized(work, op);
        ops.push_back(op);
    }
    void emit_applied(const GenTransvection& op, const VectorSystem& result) {
        if (op.is_noop()) return;
        work = result;
        ops.push_back(op);
    }
};

std::vector<Int> basis_vec(int k, int i) {
    std::vector<Int> e(k, Int(0));
    e[i] = 1;
    return e;
}

// Ops 2..4 of the integer pipeline: G-indexed vectors generate Z^k; J2 gets
// the standard basis, then the first k positions are fixed, then everything
// else is cleared.
void standardize_from_generators(Pipeline& pl, const std::vector<int>& G0 /*0-based*/) {
    const int k = pl.work.k, n = pl.work.n;
    std::vector<int> J2;
    for (int i = 0; i < n && static_cast<int>(J2.size()) < k; ++i)
        if (std::find(G0.begin(), G0.end(), i) == G0.end()) J2.push_back(i);
    if (static_cast<int>(J2.size()) < k)
        throw Error("reduce: not enough free positions (internal)");

    // Positions of J2 inside the first k keep their own basis vector.
    std::vector<int> basis_of(n, -1);
    std::vector<bool> basis_used(k, false);
    for (int pos : J2)
        if (pos < k) {
            basis_of[pos] = pos;
            basis_used[pos] = true;
        }
    int next = 0;
    for (int pos : J2) {
        if (basis_of[pos] >= 0) continue;
        while (basis_used[next]) ++next;
        basis_of[pos] = next;
        basis_used[next] = true;
    }

    IntMat SG = stack_rows(pl.work.mat, G0);
    IntMat alpha2(static_cast<int>(G0.size()), k);
    bool any2 = false;
    for (size_t b = 0; b < J2.size(); ++b) {
        std::vector<Int> target = basis_vec(k, basis_of[J2[b]]);
        std::vector<Int> diff(k);
        for (int c = 0; c < k; ++c) diff[c] = target[c] - pl.work.mat.at(J2[b], c);
        bool nz = false;
        for (const Int& d : diff)
            if (d != 0) nz = true;
        if (!nz) continue;
        auto sol = solve_left(SG, diff);
        if (!sol) throw Error("reduce: generator solve failed (internal)");
        for (size_t a = 0; a < G0.size(); ++a) alpha2.at(static_cast<int>(a), static_cast<int>(b)) = (*sol)[a];
        any2 = true;
    }
    if (any2) {
        std::vector<int> I(G0.size()), J(J2.size());
        for (size_t i = 0; i < G0.size(); ++i) I[i] = G0[i] + 1;
        for (size_t i = 0; i < J2.size(); ++i) J[i] = J2[i] + 1;
        pl.emit(GenTransvection(n, I, J, alpha2));
    }

    // Fix the first k positions using the basis copies sitting at J2.
    std::vector<int> J3;
    for (int pos = 0; pos < k; ++pos) {
        bool ok = true;
        for (int c = 0; c < k; ++c)
            if (pl.work.mat.at(pos, c) != (pos == c ? 1 : 0)) ok = false;
        if (!ok) J3.push_back(pos);
    }
    if (!J3.empty()) {
        IntMat alpha3(static_cast<int>(J2.size()), static_cast<int>(J3.size()));
        for (size_t b = 0; b < J3.size(); ++b) {
            int pos = J3[b];
            for (size_t a = 0; a < J2.size(); ++a) {
                int bi = basis_of[J2[a]];
                Int want = (pos == bi) ? 1 : 0;
                alpha3.at(static_cast<int>(a), static_cast<int>(b)) = want - pl.work.mat.at(pos, bi);
            }
        }
        std::vector<int> I(J2.size()), J(J3.size());
        for (size_t i = 0; i < J2.size(); ++i) I[i] = J2[i] + 1;
        for (size_t i = 0; i < J3.size(); ++i) J[i] = J3[i] + 1;
        pl.emit(GenTransvection(n, I, J, alpha3));
    }

    // Clear everything outside the first k.
    std::vector<int> J4;
    for (int pos = k; pos < n; ++pos) {
        bool nz = false;
        for (int c = 0; c < k; ++c)
            if (pl.work.mat.at(pos, c) != 0) nz = true;
        if (nz) J4.push_back(pos);
    }
    if (!J4.empty()) {
        IntMat alpha4(k, static_cast<int>(J4.size()));
        for (size_t b = 0; b < J4.size(); ++b)
            for (int i = 0; i < k; ++i)
                alpha4.at(i, static_cast<int>(b)) = -pl.work.mat.at(J4[b], i);
        std::vector<int> I(k), J(J4.size());
        for (int i = 0; i < k; ++i) I[i] = i + 1;
        for (size_t i = 0; i < J4.size(); ++i) J[i] = J4[i] + 1;
        pl.emit(GenTransvection(n, I, J, alpha4));
    }
}

void reduce_z_general(Pipeline& pl, ReducePolicy policy) {
    const int k = pl.work.k, n = pl.work.n;
    PrimeSystemResult pr = make_prime_core(pl.work, false);
    pl.emit_applied(pr.op, pr.system);

    std::vector<int> G0;
    for (int b : pr.block) G0.push_back(b - 1);
    std::sort(G0.begin(), G0.end());

    if (policy == ReducePolicy::Z2k1) {
        // One extra operation turns some vector into a cyclic generator of
        // Z^k modulo the block, so k+1 vectors generate everything.
        Int M = 1;
        for (const Int& q : pr.primes) M *= q;
        IntMat W = stack_rows(pl.work.mat, G0);
        auto snf = smith_normal_form(W);
        auto fac = snf.invariant_factors();
        for (size_t i = 0; i + 1 < fac.size(); ++i)
            if (fac[i] != 1) throw Error("reduce: block quotient not cyclic (internal)");

        auto psi = [&](const std::vector<Int>& y) {
            Int acc = 0;
            for (int i = 0; i < k; ++i) acc += y[i] * snf.V.at(i, k - 1);
            return Int(((acc % M) + M) % M);
        };

        int j0 = 0;
        while (std::find(G0.begin(), G0.end(), j0) != G0.end()) ++j0;

        std::vector<int> srcpos;
        for (int i = 0; i < n; ++i)
            if (i != j0) srcpos.push_back(i);
        std::vector<Int> phis(srcpos.size());
        for (size_t i = 0; i < srcpos.size(); ++i) phis[i] = psi(row_of(pl.work.mat, srcpos[i]));
        Int s0 = psi(row_of(pl.work.mat, j0));

        std::vector<Int> withM = phis;
        withM.push_back(M);
        auto [gL, combM] = gcd_combo(withM);

        // CRT choice of t: s0 + gL*t coprime to M.
        Int t = 0, mod = 1;
        for (const Int& q : pr.primes) {
            if (mpz_divisible_p(gL.get_mpz_t(), q.get_mpz_t())) {
                if (mpz_divisible_p(s0.get_mpz_t(), q.get_mpz_t()))
                    throw Error("reduce: generator unreachable (internal)");
                continue;
            }
            Int ginv, tmp, gq;
            mpz_gcdext(gq.get_mpz_t(), ginv.get_mpz_t(), tmp.get_mpz_t(), gL.get_mpz_t(), q.get_mpz_t());
            Int want = (((Int(1) - s0) * ginv) % q + q) % q;
            // t := t + mod * ((want - t) * mod^{-1} mod q)
            Int minv, g2;
            mpz_gcdext(g2.get_mpz_t(), minv.get_mpz_t(), tmp.get_mpz_t(), mod.get_mpz_t(), q.get_mpz_t());
            Int delta = (((want - t) % q + q) % q * ((minv % q + q) % q)) % q;
            t += mod * delta;
            mod *= q;
        }
        Int snew = ((s0 + gL * t) % M + M) % M;
        Int gg;
        mpz_gcd(gg.get_mpz_t(), snew.get_mpz_t(), M.get_mpz_t());
        if (gg != 1) throw Error("reduce: generator construction failed (internal)");

        std::vector<int> I;
        std::vector<Int> coeffs;
        for (size_t i = 0; i < srcpos.size(); ++i) {
            Int ci = (combM[i] * t) % M;
            if (ci != 0) {
                I.push_back(srcpos[i] + 1);
                coeffs.push_back(ci);
            }
        }
        if (!I.empty()) {
            IntMat alpha(static_cast<int>(I.size()), 1);
            for (size_t i = 0; i < I.size(); ++i) alpha.at(static_cast<int>(i), 0) = coeffs[i];
            pl.emit(GenTransvection(n, I, {j0 + 1}, alpha));
        }
        G0.push_back(j0);
        std::sort(G0.begin(), G0.end());
        if (lattice_index(stack_rows(pl.work.mat, G0)) != 1)
            throw Error("reduce: k+1 generators do not span (internal)");
    } else {
        // Greedy extension of the prime block to <= 2k generating vectors.
        Int idx = lattice_index(stack_rows(pl.work.mat, G0));
        for (int pos = 0; pos < n && idx != 1; ++pos) {
            if (std::find(G0.begin(), G0.end(), pos) != G0.end()) continue;
            std::vector<int> trial = G0;
            trial.push_back(pos);
            std::sort(trial.begin(), trial.end());
            Int idx2 = lattice_index(stack_rows(pl.work.mat, trial));
            if (idx2 != 0 && idx2 < idx) {
                G0 = trial;
                idx = idx2;
            }
        }
        if (idx != 1) throw Error("reduce: generator extension failed (internal)");
    }
    standardize_from_generators(pl, G0);
}

// k = 1 admits the classical three-operation reduction: prime (or unit) at a
// position >= 2, then 1 at the first position, then clear the rest.
void reduce_z_k1(Pipeline& pl) {
    const int n = pl.work.n;
    auto val = [&](int pos) { return pl.work.mat.at(pos, 0); };

    Int tail_gcd = 0;
    int tail_nonzero = -1;
    for (int i = 1; i < n; ++i)
        if (val(i) != 0) {
            tail_nonzero = i;
            mpz_gcd(tail_gcd.get_mpz_t(), tail_gcd.get_mpz_t(), val(i).get_mpz_t());
        }

    if (tail_nonzero < 0) {
        // (+-1, 0, ..., 0); route through position 2.
        IntMat a1(1, 1);
        a1.at(0, 0) = val(0) > 0 ? 1 : -1; // v2 := +1
        pl.emit(GenTransvection(n, {1}, {2}, a1));
        if (val(0) != 1) {
            IntMat a2(1, 1);
            a2.at(0, 0) = 1 - val(0);
            pl.emit(GenTransvection(n, {2}, {1}, a2));
        }
        IntMat a3(1, 1);
        a3.at(0, 0) = -1;
        pl.emit(GenTransvection(n, {1}, {2}, a3));
        return;
    }

    // Scan for a target t >= 2 whose complement keeps both gcds nonzero.
    int t = -1;
    Int dt = 0, gt = 0;
    for (int cand = 1; cand < n; ++cand) {
        Int d = 0, g = 0;
        for (int i = 0; i < n; ++i) {
            if (i == cand) continue;
            mpz_gcd(d.get_mpz_t(), d.get_mpz_t(), val(i).get_mpz_t());
            if (i >= 1) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), val(i).get_mpz_t());
        }
        if (d != 0 && g != 0) {
            t = cand;
            dt = d;
            gt = g;
            break;
        }
    }
    if (t < 0) throw Error("reduce: k=1 scan failed (internal)");

    // Any prime coprime to the residual tail gcd works here; no size bound
    // is needed for k = 1, which keeps entries small when this runs on the
    // inner levels of a factorization.
    Int pj = search_prime(((val(t) % dt) + dt) % dt, dt, 1, {}, gt);
    if (pj != val(t)) {
        std::vector<Int> vals;
        std::vector<int> srcpos;
        for (int i = 0; i < n; ++i)
            if (i != t) {
                srcpos.push_back(i);
                vals.push_back(val(i));
            }
        auto [g, combo] = gcd_combo(vals);
        Int scale = (pj - val(t)) / g;
        std::vector<int> I;
        std::vector<Int> cs;
        for (size_t i = 0; i < combo.size(); ++i) {
            Int ci = combo[i] * scale;
            if (ci != 0) {
                I.push_back(srcpos[i] + 1);
                cs.push_back(ci);
            }
        }
        IntMat alpha(static_cast<int>(I.size()), 1);
        for (size_t i = 0; i < I.size(); ++i) alpha.at(static_cast<int>(i), 0) = cs[i];
        pl.emit(GenTransvection(n, I, {t + 1}, alpha));
    }

    if (val(0) != 1) {
        std::vector<Int> vals;
        std::vector<int> srcpos;
        for (int i = 1; i < n; ++i) {
            srcpos.push_back(i);
            vals.push_back(val(i));
        }
        auto [g, combo] = gcd_combo(vals);
        if (g != 1) throw Error("reduce: k=1 unit step failed (internal)");
        Int need = 1 - val(0);
        std::vector<int> I;
        std::vector<Int> cs;
        for (size_t i = 0; i < combo.size(); ++i) {
            Int ci = combo[i] * need;
            if (ci != 0) {
                I.push_back(srcpos[i] + 1);
                cs.push_back(ci);
            }
        }
        IntMat alpha(static_cast<int>(I.size()), 1);
        for (size_t i = 0; i < I.size(); ++i) alpha.at(static_cast<int>(i), 0) = cs[i];
        pl.emit(GenTransvection(n, I, {1}, alpha));
    }

    std::vector<int> J;
    for (int i = 1; i < n; ++i)
        if (val(i) != 0) J.push_back(i + 1);
    if (!J.empty()) {
        IntMat alpha(1, static_cast<int>(J.size()));
        for (size_t b = 0; b < J.size(); ++b) alpha.at(0, static_cast<int>(b)) = -val(J[b] - 1);
        pl.emit(GenTransvection(n, {1}, J, alpha));
    }
}

std::vector<int> greedy_independent_mod(const IntMat& mat, const std::vector<int>& candidates,
                                        int k, std::int64_t p) {
    std::vector<int> chosen;
    for (int pos : candidates) {
        if (static_cast<int>(chosen.size()) == k) break;
        std::vector<int> trial = chosen;
        trial.push_back(pos);
        if (reduce_mod_p(stack_rows(mat, trial), p).rank() == static_cast<int>(trial.size()))
            chosen = trial;
    }
    return chosen;
}

// Solve x * M = b over F_p for invertible M (k x k rows).
std::vector<std::int64_t> solve_left_mod(const ModMat& M, const std::vector<std::int64_t>& b) {
    const std::int64_t p = M.modulus();
    const int k = M.rows();
    // Transpose to the column convention and run Gauss-Jordan on [M^T | b].
    std::vector<std::vector<std::int64_t>> a(k, std::vector<std::int64_t>(k + 1));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = M.at(j, i);
        a[i][k] = ((b[i] % p) + p) % p;
    }
    auto mulp = [&](std::int64_t x, std::int64_t y) {
        return static_cast<std::int64_t>(static_cast<unsigned __int128>(x) * y % p);
    };
    auto invp = [&](std::int64_t x) {
        std::int64_t r = 1, e = p - 2, base = ((x % p) + p) % p;
        while (e) {
            if (e & 1) r = mulp(r, base);
            base = mulp(base, base);
            e >>= 1;
        }
        return r;
    };
    for (int c = 0; c < k; ++c) {
        int piv = -1;
        for (int i = c; i < k; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv < 0) throw Error("solve_left_mod: singular matrix (internal)");
        std::swap(a[c], a[piv]);
        std::int64_t inv = invp(a[c][c]);
        for (int j = c; j <= k; ++j) a[c][j] = mulp(a[c][j], inv);
        for (int i = 0; i < k; ++i) {
            if (i == c || a[i][c] == 0) continue;
            std::int64_t f = a[i][c];
            for (int j = c; j <= k; ++j) a[i][j] = ((a[i][j] - mulp(f, a[c][j])) % p + p) % p;
        }
    }
    std::vector<std::int64_t> x(k);
    for (int i = 0; i < k; ++i) x[i] = a[i][k];
    return x;
}

// Field case: make the middle block invertible, write the standard basis
// into the first k positions from it, clear the rest. Never touches
// primality, only invertibility.
void reduce_fp(Pipeline& pl) {
    const int k = pl.work.k, n = pl.work.n;
    const std::int64_t p = pl.work.p;
    auto modmat = [&](const std::vector<int>& pos) {
        return reduce_mod_p(stack_rows(pl.work.mat, pos), p);
    };

    std::vector<int> middle;
    for (int i = k; i < 2 * k; ++i) middle.push_back(i);

    if (modmat(middle).rank() < k) {
        std::vector<int> t0 = greedy_independent_mod(pl.work.mat, middle, k, p);
        std::vector<int> patch;
        for (int pos : middle)
            if (std::find(t0.begin(), t0.end(), pos) == t0.end()) patch.push_back(pos);
        // completing vectors: extend span(middle) using positions outside it
        std::vector<int> span = middle;
        std::vector<int> completing;
        for (int pos = 0; pos < n && completing.size() < patch.size(); ++pos) {
            if (std::find(middle.begin(), middle.end(), pos) != middle.end()) continue;
            std::vector<int> trial = span;
            trial.push_back(pos);
            if (modmat(trial).rank() > modmat(span).rank()) {
                completing.push_back(pos);
                span = trial;
            }
        }
        if (completing.size() != patch.size())
            throw Error("reduce: field patch failed (internal)");
        IntMat alpha(static_cast<int>(completing.size()), static_cast<int>(patch.size()));
        for (size_t i = 0; i < patch.size(); ++i) alpha.at(static_cast<int>(i), static_cast<int>(i)) = 1;
        std::vector<int> I(completing.size()), J(patch.size());
        for (size_t i = 0; i < completing.size(); ++i) I[i] = completing[i] + 1;
        for (size_t i = 0; i < patch.size(); ++i) J[i] = patch[i] + 1;
        std::sort(I.begin(), I.end());
        std::sort(J.begin(), J.end());
        pl.emit(GenTransvection(n, I, J, alpha));
        if (modmat(middle).rank() < k) throw Error("reduce: middle block still singular (internal)");
    }

    // First k positions := standard basis, solved over the middle block.
    ModMat M = modmat(middle);
    std::vector<int> J2;
    for (int pos = 0; pos < k; ++pos) {
        bool ok = true;
        for (int c = 0; c < k; ++c)
            if (pl.work.mat.at(pos, c) != (pos == c ? 1 : 0)) ok = false;
        if (!ok) J2.push_back(pos);
    }
    if (!J2.empty()) {
        IntMat alpha(k, static_cast<int>(J2.size()));
        for (size_t b = 0; b < J2.size(); ++b) {
            int pos = J2[b];
            std::vector<std::int64_t> diff(k);
            for (int c = 0; c < k; ++c) {
                std::int64_t want = (pos == c) ? 1 : 0;
                std::int64_t have = pl.work.mat.at(pos, c).get_si();
                diff[c] = ((want - have) % p + p) % p;
            }
            auto x = solve_left_mod(M, diff);
            for (int a = 0; a < k; ++a) alpha.at(a, static_cast<int>(b)) = x[a];
        }
        std::vector<int> I(k), J(J2.size());
        for (int i = 0; i < k; ++i) I[i] = middle[i] + 1;
        for (size_t i = 0; i < J2.size(); ++i) J[i] = J2[i] + 1;
        pl.emit(GenTransvection(n, I, J, alpha));
    }

    std::vector<int> J3;
    for (int pos = k; pos < n; ++pos) {
        bool nz = false;
        for (int c = 0; c < k; ++c)
            if (pl.work.mat.at(pos, c) != 0) nz = true;
        if (nz) J3.push_back(pos);
    }
    if (!J3.empty()) {
        IntMat alpha(k, static_cast<int>(J3.size()));
        for (size_t b = 0; b < J3.size(); ++b)
            for (int i = 0; i < k; ++i) {
                std::int64_t have = pl.work.mat.at(J3[b], i).get_si();
                alpha.at(i, static_cast<int>(b)) = (p - have) % p;
            }
        std::vector<int> I(k), J(J3.size());
        for (int i = 0; i < k; ++i) I[i] = i + 1;
        for (size_t i = 0; i < J3.size(); ++i) J[i] = J3[i] + 1;
        pl.emit(GenTransvection(n, I, J, alpha));
    }
}

} // namespace

ReductionTrace reduce_to_standard(const VectorSystem& v, ReducePolicy policy) {
    switch (policy) {
        case ReducePolicy::Z3k:
            if (v.ring != Ring::Z) throw PolicyError("policy Z-3k needs a Z system");
            if (v.n < 3 * v.k) throw PolicyError("policy Z-3k needs n >= 3k");
            break;
        case ReducePolicy::Z2k1:
            if (v.ring != Ring::Z) throw PolicyError("policy Z-2k1 needs a Z system");
            if (v.n < 2 * v.k + 1) throw PolicyError("policy Z-2k1 needs n >= 2k+1");
            break;
        case ReducePolicy::Fp2k:
            if (v.ring != Ring::Fp) throw PolicyError("policy Fp-2k needs an F_p system");
            if (v.n < 2 * v.k) throw PolicyError("policy Fp-2k needs n >= 2k");
            break;
    }
    Pipeline pl{v, {}};
    if (!pl.work.is_standard()) {
        if (v.ring == Ring::Fp)
            reduce_fp(pl);
        else if (v.k == 1)
            reduce_z_k1(pl);
        else
            reduce_z_general(pl, policy);
    }
    if (!pl.work.is_standard())
        throw Error("reduce: pipeline did not reach the standard system (internal)");
    ReductionTrace tr;
    tr.policy = policy;
    tr.ops = std::move(pl.ops);
    tr.final = std::move(pl.work);
    return tr;
}

bool replay_trace(const VectorSystem& input, const ReductionTrace& trace) {
    VectorSystem cur = input;
    for (const auto& op : trace.ops) {
        cur = apply_generalized(cur, op);
        if (!rows_generate_all(cur.mat, cur.ring, cur.p)) return false;
    }
    return cur.mat == trace.final.mat;
}

VectorSystem random_complete_system(int k, int n, long max_entry, std::uint64_t seed,
                                    Ring ring, std::int64_t p) {
    // Raw engine draws only: keeps systems identical across platforms.
    std::mt19937_64 rng(seed);
    if (ring == Ring::Fp) {
        for (;;) {
            IntMat rows(n, k);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < k; ++j)
                    rows.at(i, j) = static_cast<long>(rng() % static_cast<std::uint64_t>(p));
            if (reduce_mod_p(rows, p).rank() == k) return VectorSystem::from_rows(rows, ring, p);
        }
    }
    auto draw = [&rng](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    for (;;) {
        IntMat core = IntMat::identity(k);
        if (k > 1) {
            for (int w = 0; w < 3 * k; ++w) {
                int i = static_cast<int>(rng() % k), j = static_cast<int>(rng() % k);
                if (i == j) continue;
                long m = draw(-2, 2);
                for (int c = 0; c < k; ++c) core.at(i, c) += Int(m) * core.at(j, c);
            }
        }
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            for (int j = 0; j < k && ok; ++j)
                if (abs(core.at(i, j)) > max_entry) ok = false;
        if (!ok) continue;

        IntMat rows(n, k);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng() % static_cast<std::uint64_t>(i + 1)]);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) rows.at(perm[i], j) = core.at(i, j);
        for (int i = k; i < n; ++i)
            for (int j = 0; j < k; ++j) rows.at(perm[i], j) = draw(-max_entry, max_entry);
        return VectorSystem::from_rows(rows, ring, p);
    }
}

} // namespace slnz
